//! Character data model: glyphs, trajectories, primitive strokes, landmarks
//! and script corpora.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect, SplineSegment, COINCIDENCE_REL_TOL};

/// One visual instance of a character: an ordered set of B-spline segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Glyph {
    pub id: String,
    pub script_id: String,
    pub segments: Vec<SplineSegment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Relative usage frequency; absent means weight 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage_frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segment: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.segment {
            Some(i) => write!(f, "segment {i}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::invalid(v.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMode {
    #[default]
    None,
    UnitDiagonal,
}

impl Glyph {
    pub fn new(id: impl Into<String>, script_id: impl Into<String>, segments: Vec<SplineSegment>) -> Self {
        Glyph {
            id: id.into(),
            script_id: script_id.into(),
            segments,
            baseline_y: None,
            label: None,
            usage_frequency: None,
        }
    }

    pub fn with_baseline(mut self, y: f64) -> Self {
        self.baseline_y = Some(y);
        self
    }

    pub fn with_frequency(mut self, f: f64) -> Self {
        self.usage_frequency = Some(f);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Weight used for frequency-weighted aggregation.
    pub fn weight(&self) -> f64 {
        self.usage_frequency.unwrap_or(1.0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.segments.is_empty() {
            violations.push(Violation {
                segment: None,
                message: "glyph has no segments".into(),
            });
        }
        for (i, s) in self.segments.iter().enumerate() {
            for message in s.violations() {
                violations.push(Violation {
                    segment: Some(i),
                    message,
                });
            }
        }
        if self.baseline_y.is_some_and(|b| !b.is_finite()) {
            violations.push(Violation {
                segment: None,
                message: "baseline is not finite".into(),
            });
        }
        if self
            .usage_frequency
            .is_some_and(|f| !f.is_finite() || f < 0.0)
        {
            violations.push(Violation {
                segment: None,
                message: "usage frequency must be finite and >= 0".into(),
            });
        }
        ValidationReport { violations }
    }

    /// Tight bounding box of all segments.
    pub fn bbox(&self) -> Option<Rect> {
        self.segments
            .iter()
            .map(SplineSegment::bounding_box)
            .reduce(Rect::union)
    }

    pub fn diagonal(&self) -> f64 {
        self.bbox().map(|r| r.diagonal()).unwrap_or(0.0)
    }

    /// Absolute coincidence tolerance for this glyph.
    pub fn tolerance(&self) -> f64 {
        COINCIDENCE_REL_TOL * self.diagonal()
    }

    /// Apply a point map to every segment and to the baseline's y.
    pub fn transformed(&self, f: impl Fn(Point) -> Point) -> Glyph {
        let baseline_y = self.baseline_y.map(|y| f(Point::new(0.0, y)).y);
        Glyph {
            segments: self.segments.iter().map(|s| s.transformed(&f)).collect(),
            baseline_y,
            ..self.clone()
        }
    }

    /// The map `p -> (p - origin) * scale` that `normalize` applies.
    pub fn normalization(&self, mode: NormalizeMode) -> Result<(Point, f64)> {
        self.validate().into_result()?;
        match mode {
            NormalizeMode::None => Ok((Point::ORIGIN, 1.0)),
            NormalizeMode::UnitDiagonal => {
                let bbox = self.bbox().expect("validated glyph has segments");
                let diag = bbox.diagonal();
                if !(diag > 0.0) {
                    return Err(Error::DegenerateGlyph(format!(
                        "glyph {} has a zero-size bounding box",
                        self.id
                    )));
                }
                Ok((bbox.min, 1.0 / diag))
            }
        }
    }

    pub fn normalize(&self, mode: NormalizeMode) -> Result<Glyph> {
        let (origin, scale) = self.normalization(mode)?;
        if mode == NormalizeMode::None {
            return Ok(self.clone());
        }
        Ok(self.transformed(|p| (p - origin) * scale))
    }

    /// Uniform-parameter samples per segment, in storage order.
    pub fn to_polyline(&self, samples_per_segment: usize) -> Vec<Vec<Point>> {
        let n = samples_per_segment.max(2);
        self.segments.iter().map(|s| s.sample(n)).collect()
    }
}

/// One directed pass over a glyph segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedPass {
    pub segment_index: usize,
    #[serde(default)]
    pub reversed: bool,
    /// Immediate reverse re-tracing of the previous pass over the same segment.
    #[serde(default)]
    pub retrace: bool,
}

impl DirectedPass {
    pub fn forward(segment_index: usize) -> Self {
        DirectedPass {
            segment_index,
            reversed: false,
            retrace: false,
        }
    }

    pub fn backward(segment_index: usize) -> Self {
        DirectedPass {
            segment_index,
            reversed: true,
            retrace: false,
        }
    }

    /// The retrace of this pass.
    pub fn retraced(self) -> Self {
        DirectedPass {
            segment_index: self.segment_index,
            reversed: !self.reversed,
            retrace: true,
        }
    }

    /// The segment oriented in travel direction.
    pub fn curve(&self, glyph: &Glyph) -> SplineSegment {
        let s = &glyph.segments[self.segment_index];
        if self.reversed {
            s.reversed()
        } else {
            s.clone()
        }
    }

    pub fn start(&self, glyph: &Glyph) -> Point {
        let s = &glyph.segments[self.segment_index];
        if self.reversed {
            s.end()
        } else {
            s.start()
        }
    }

    pub fn end(&self, glyph: &Glyph) -> Point {
        let s = &glyph.segments[self.segment_index];
        if self.reversed {
            s.start()
        } else {
            s.end()
        }
    }
}

/// Movement between one pen-down and the following pen-up.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PenStroke {
    pub passes: Vec<DirectedPass>,
}

impl PenStroke {
    pub fn new(passes: Vec<DirectedPass>) -> Self {
        PenStroke { passes }
    }

    pub fn start(&self, glyph: &Glyph) -> Point {
        self.passes[0].start(glyph)
    }

    pub fn end(&self, glyph: &Glyph) -> Point {
        self.passes[self.passes.len() - 1].end(glyph)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    #[default]
    Reconstructed,
    Recorded,
    Manual,
}

/// Ordered pen movement producing a glyph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trajectory {
    pub glyph_id: String,
    pub pen_strokes: Vec<PenStroke>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl Trajectory {
    pub fn new(glyph_id: impl Into<String>, pen_strokes: Vec<PenStroke>, provenance: Provenance) -> Self {
        Trajectory {
            glyph_id: glyph_id.into(),
            pen_strokes,
            provenance,
        }
    }

    /// First pen-down location.
    pub fn start(&self, glyph: &Glyph) -> Point {
        self.pen_strokes[0].start(glyph)
    }

    /// Last pen-up location.
    pub fn end(&self, glyph: &Glyph) -> Point {
        self.pen_strokes[self.pen_strokes.len() - 1].end(glyph)
    }

    pub fn passes(&self) -> impl Iterator<Item = &DirectedPass> {
        self.pen_strokes.iter().flat_map(|s| s.passes.iter())
    }

    /// Check coverage, retrace placement and end-to-end connectivity.
    pub fn validate(&self, glyph: &Glyph) -> Result<()> {
        if self.glyph_id != glyph.id {
            return Err(Error::invalid(format!(
                "trajectory for {:?} applied to glyph {:?}",
                self.glyph_id, glyph.id
            )));
        }
        if self.pen_strokes.is_empty() {
            return Err(Error::invalid("trajectory has no pen strokes"));
        }
        let n = glyph.segments.len();
        let mut seen = vec![false; n];
        let tol = glyph.tolerance();
        for (si, stroke) in self.pen_strokes.iter().enumerate() {
            if stroke.passes.is_empty() {
                return Err(Error::invalid(format!("pen stroke {si} is empty")));
            }
            for (k, pass) in stroke.passes.iter().enumerate() {
                if pass.segment_index >= n {
                    return Err(Error::invalid(format!(
                        "pen stroke {si} references segment {} of {n}",
                        pass.segment_index
                    )));
                }
                if pass.retrace {
                    let prev = k.checked_sub(1).map(|j| stroke.passes[j]);
                    let ok = prev.is_some_and(|p| {
                        !p.retrace
                            && p.segment_index == pass.segment_index
                            && p.reversed != pass.reversed
                    });
                    if !ok {
                        return Err(Error::invalid(format!(
                            "retrace of segment {} in pen stroke {si} does not follow its first pass",
                            pass.segment_index
                        )));
                    }
                } else {
                    if seen[pass.segment_index] {
                        return Err(Error::invalid(format!(
                            "segment {} traversed more than once",
                            pass.segment_index
                        )));
                    }
                    seen[pass.segment_index] = true;
                }
                if k > 0 {
                    let gap = stroke.passes[k - 1].end(glyph).distance(pass.start(glyph));
                    if gap > tol {
                        return Err(Error::invalid(format!(
                            "pen stroke {si} is disconnected before pass {k} (gap {gap})"
                        )));
                    }
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("segment {missing} is never traversed")));
        }
        Ok(())
    }
}

/// Eight compass directions, 45-degree sectors centered on E = 0, N = 90 (y-up).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DirectionCode {
    E,
    NE,
    N,
    NW,
    W,
    SW,
    S,
    SE,
}

impl DirectionCode {
    /// Counterclockwise order starting at E; index `i` is centered on `45 i` degrees.
    pub const CCW: [DirectionCode; 8] = [
        DirectionCode::E,
        DirectionCode::NE,
        DirectionCode::N,
        DirectionCode::NW,
        DirectionCode::W,
        DirectionCode::SW,
        DirectionCode::S,
        DirectionCode::SE,
    ];

    /// Fixed reporting and tie-break order.
    pub const REPORT_ORDER: [DirectionCode; 8] = [
        DirectionCode::N,
        DirectionCode::NE,
        DirectionCode::E,
        DirectionCode::SE,
        DirectionCode::S,
        DirectionCode::SW,
        DirectionCode::W,
        DirectionCode::NW,
    ];

    pub fn ccw_index(self) -> usize {
        self as usize
    }

    pub fn center_deg(self) -> f64 {
        45.0 * self.ccw_index() as f64
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DirectionCode::E => "E",
            DirectionCode::NE => "NE",
            DirectionCode::N => "N",
            DirectionCode::NW => "NW",
            DirectionCode::W => "W",
            DirectionCode::SW => "SW",
            DirectionCode::S => "S",
            DirectionCode::SE => "SE",
        }
    }

    /// Sector containing `angle_deg`. A boundary angle belongs to the
    /// counterclockwise sector.
    pub fn from_angle(angle_deg: f64) -> DirectionCode {
        let a = crate::geometry::normalize_deg(angle_deg + 22.5);
        let idx = ((a / 45.0).floor() as usize).min(7);
        DirectionCode::CCW[idx]
    }
}

impl fmt::Display for DirectionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DirectionCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DirectionCode::CCW
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown direction code {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpDown {
    Up,
    Down,
}

/// One ballistic stroke between consecutive landmark points, or an invisible
/// straight pen-drag between pen strokes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveStroke {
    /// Sub-curves in writing order (several when the stroke spans a
    /// segment junction that is not a landmark).
    pub curves: Vec<SplineSegment>,
    pub visible: bool,
    pub net_angle: f64,
    pub length: f64,
    pub direction_code: DirectionCode,
    pub updown: UpDown,
    pub index: usize,
}

impl PrimitiveStroke {
    pub fn start(&self) -> Point {
        self.curves[0].start()
    }

    pub fn end(&self) -> Point {
        self.curves[self.curves.len() - 1].end()
    }

    /// Net displacement vector.
    pub fn net_vector(&self) -> Point {
        self.end() - self.start()
    }

    /// Dense polyline through all sub-curves.
    pub fn polyline(&self, samples_per_curve: usize) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for c in &self.curves {
            let pts = c.sample(samples_per_curve);
            let skip = usize::from(!out.is_empty());
            out.extend(pts.into_iter().skip(skip));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandmarkKind {
    CurvatureExtremum,
    SharpJunction,
    PenEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandmarkSource {
    #[default]
    Auto,
    Manual,
}

/// Point where primitive strokes connect; a segmentation cut point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandmarkPoint {
    pub location: Point,
    pub kind: LandmarkKind,
    #[serde(default)]
    pub source: LandmarkSource,
}

/// A named set of glyphs forming one script.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptCorpus {
    pub id: String,
    pub name: String,
    pub glyphs: Vec<Glyph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_y: Option<f64>,
}

impl ScriptCorpus {
    pub fn validate(&self) -> Result<()> {
        if self.glyphs.is_empty() {
            return Err(Error::invalid(format!("corpus {} has no glyphs", self.id)));
        }
        let mut ids = HashSet::new();
        for g in &self.glyphs {
            if !ids.insert(g.id.as_str()) {
                return Err(Error::invalid(format!("duplicate glyph id {:?}", g.id)));
            }
        }
        Ok(())
    }

    pub fn glyph(&self, id: &str) -> Option<&Glyph> {
        self.glyphs.iter().find(|g| g.id == id)
    }

    /// Glyph with the corpus baseline filled in when it has none of its own.
    pub fn resolved_glyph(&self, g: &Glyph) -> Glyph {
        let mut g = g.clone();
        if g.baseline_y.is_none() {
            g.baseline_y = self.baseline_y;
        }
        g
    }
}
