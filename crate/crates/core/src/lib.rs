//! Quantitative analysis of handwritten scripts.
//!
//! Characters are stored as ordered sets of B-spline segments. From a
//! static glyph the crate reconstructs plausible writing trajectories,
//! cuts them into primitive strokes at landmark points, and computes visual,
//! dynamic and cognitive metrics per character and per script.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod metrics;
pub mod glyph;
pub mod io;
pub mod pipeline;
pub mod reconstruct;
pub mod script;
pub mod segment;

pub use error::{Error, Result};
pub use geometry::{Circle, Point, Rect, SplineSegment};
pub use glyph::{
    DirectedPass, DirectionCode, Glyph, LandmarkKind, LandmarkPoint, LandmarkSource, NormalizeMode,
    PenStroke, PrimitiveStroke, Provenance, ScriptCorpus, Trajectory, UpDown,
};
