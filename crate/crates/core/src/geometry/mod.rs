//! Numeric kernel: points, B-spline segments, hulls, enclosing circles,
//! polyline simplification and crossing counts.
//!
//! Coordinates are y-up. Angles are degrees counterclockwise from +x in
//! `[0, 360)`.

mod hull;
mod point;
mod polyline;
mod spline;

pub use hull::{convex_hull, min_enclosing_circle, polygon_area};
pub use point::{angle_between_deg, normalize_deg, Circle, Point, Rect};
pub use polyline::{
    count_crossings, count_crossings_with_tol, point_polyline_distance, point_segment_distance,
    rdp_indices, rdp_simplify, segment_intersection,
};
pub use spline::{fit_spline, peak_indices, Derivatives, SplineSegment, MAX_DEGREE};

/// Relative tolerance for treating two points as coincident, as a fraction of
/// the glyph bounding-box diagonal.
pub const COINCIDENCE_REL_TOL: f64 = 1e-6;

/// Default uniform samples per segment for curvature scans.
pub const DEFAULT_CURVATURE_SAMPLES: usize = 128;

/// Default curvature-peak prominence as a fraction of the glyph's max `|curvature|`.
pub const DEFAULT_PROMINENCE_FRACTION: f64 = 0.05;
