//! Cutting trajectories into primitive strokes at landmark points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    angle_between_deg, point_polyline_distance, Point, SplineSegment, DEFAULT_CURVATURE_SAMPLES,
    DEFAULT_PROMINENCE_FRACTION,
};
use crate::glyph::{
    DirectionCode, Glyph, LandmarkKind, LandmarkPoint, LandmarkSource, PrimitiveStroke, Trajectory,
    UpDown,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmentationConfig {
    pub curvature_samples: usize,
    /// Minimum peak prominence as a fraction of the glyph's max `|curvature|`.
    pub curvature_prominence: f64,
    pub sharp_junction_threshold_deg: f64,
    /// Fraction of the glyph bounding-box diagonal.
    pub retrace_hausdorff_tol: f64,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig {
            curvature_samples: DEFAULT_CURVATURE_SAMPLES,
            curvature_prominence: DEFAULT_PROMINENCE_FRACTION,
            sharp_junction_threshold_deg: 60.0,
            retrace_hausdorff_tol: 0.03,
        }
    }
}

impl SegmentationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.curvature_samples < 16 {
            return Err(Error::invalid("curvature_samples must be >= 16"));
        }
        if !(self.curvature_prominence >= 0.0) || !self.curvature_prominence.is_finite() {
            return Err(Error::invalid("curvature_prominence must be finite and >= 0"));
        }
        let t = self.sharp_junction_threshold_deg;
        if !(t > 0.0 && t < 180.0) {
            return Err(Error::invalid("sharp_junction_threshold_deg must be in (0, 180)"));
        }
        if !(self.retrace_hausdorff_tol > 0.0) || !self.retrace_hausdorff_tol.is_finite() {
            return Err(Error::invalid("retrace_hausdorff_tol must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationResult {
    pub landmarks: Vec<LandmarkPoint>,
    pub strokes: Vec<PrimitiveStroke>,
    /// Direction codes of the visible strokes in writing order.
    pub stroke_inventory_key: Vec<DirectionCode>,
    /// Index pairs `(i, i + 1)` of strokes where `i + 1` retraces `i`.
    pub retraces: Vec<(usize, usize)>,
    pub pen_strokes: usize,
    pub config: SegmentationConfig,
}

impl SegmentationResult {
    pub fn visible(&self) -> impl Iterator<Item = &PrimitiveStroke> {
        self.strokes.iter().filter(|s| s.visible)
    }

    pub fn invisible(&self) -> impl Iterator<Item = &PrimitiveStroke> {
        self.strokes.iter().filter(|s| !s.visible)
    }

    pub fn landmarks_of(&self, kind: LandmarkKind) -> usize {
        self.landmarks.iter().filter(|l| l.kind == kind).count()
    }
}

/// Sector code of a stroke's net direction.
pub fn quantize_direction(s: &PrimitiveStroke) -> Result<DirectionCode> {
    if !(s.length > 0.0) {
        return Err(Error::invalid("direction of a zero-length stroke"));
    }
    Ok(DirectionCode::from_angle(s.net_angle))
}

/// Down iff the angle lies in `[210, 330]` degrees.
pub fn updown_for_angle(angle_deg: f64) -> UpDown {
    if (210.0..=330.0).contains(&angle_deg) {
        UpDown::Down
    } else {
        UpDown::Up
    }
}

pub fn classify_updown(s: &PrimitiveStroke) -> Result<UpDown> {
    if !(s.length > 0.0) {
        return Err(Error::invalid("up/down class of a zero-length stroke"));
    }
    Ok(updown_for_angle(s.net_angle))
}

fn matching_tol(g: &Glyph) -> f64 {
    g.tolerance().max(1e-12)
}

fn push_unique(out: &mut Vec<LandmarkPoint>, lm: LandmarkPoint, tol: f64) {
    if !out.iter().any(|l| l.location.distance(lm.location) <= tol) {
        out.push(lm);
    }
}

/// Automatic landmarks: intermediate pen-ups, sharp junctions and
/// curvature extrema, deduplicated by location in that priority order.
pub fn detect_landmarks(g: &Glyph, t: &Trajectory, cfg: &SegmentationConfig) -> Result<Vec<LandmarkPoint>> {
    cfg.validate()?;
    t.validate(g)?;
    let tol = matching_tol(g);
    let auto = |location, kind| LandmarkPoint {
        location,
        kind,
        source: LandmarkSource::Auto,
    };
    let mut out = Vec::new();

    let last = t.pen_strokes.len() - 1;
    for stroke in &t.pen_strokes[..last] {
        push_unique(&mut out, auto(stroke.end(g), LandmarkKind::PenEvent), tol);
    }

    for stroke in &t.pen_strokes {
        for pair in stroke.passes.windows(2) {
            let a = pair[0].curve(g);
            let b = pair[1].curve(g);
            let turn = angle_between_deg(a.tangent(1.0), b.tangent(0.0));
            if turn > cfg.sharp_junction_threshold_deg {
                push_unique(&mut out, auto(a.end(), LandmarkKind::SharpJunction), tol);
            }
        }
    }

    let profiles: Vec<Vec<f64>> = g
        .segments
        .iter()
        .map(|s| s.abs_curvature_profile(cfg.curvature_samples))
        .collect();
    let kmax = profiles.iter().flatten().copied().fold(0.0, f64::max);
    if kmax > 0.0 {
        let prominence = cfg.curvature_prominence * kmax;
        for s in &g.segments {
            for u in s.curvature_extrema(cfg.curvature_samples, prominence) {
                push_unique(&mut out, auto(s.eval(u), LandmarkKind::CurvatureExtremum), tol);
            }
        }
    }
    Ok(out)
}

/// Auto landmarks minus suppressed locations plus manual additions.
pub fn effective_landmarks(
    auto: &[LandmarkPoint],
    manual: &[LandmarkPoint],
    suppressed: &[Point],
    tol: f64,
) -> Vec<LandmarkPoint> {
    let mut out: Vec<LandmarkPoint> = auto
        .iter()
        .filter(|l| !suppressed.iter().any(|p| p.distance(l.location) <= tol))
        .copied()
        .collect();
    for m in manual {
        push_unique(&mut out, *m, tol);
    }
    out
}

/// Distance from `q` to the trajectory path.
pub fn distance_to_path(g: &Glyph, t: &Trajectory, q: Point) -> f64 {
    t.passes()
        .map(|p| g.segments[p.segment_index].closest_point(q).1)
        .fold(f64::INFINITY, f64::min)
}

fn net_angle(curves: &[SplineSegment], tol: f64) -> f64 {
    let chord = curves[curves.len() - 1].end() - curves[0].start();
    if chord.norm() > tol {
        chord.angle_deg()
    } else {
        curves[0].tangent(0.0).angle_deg()
    }
}

fn make_stroke(curves: Vec<SplineSegment>, visible: bool, index: usize, tol: f64) -> PrimitiveStroke {
    let length = curves.iter().map(SplineSegment::arc_length).sum();
    let angle = net_angle(&curves, tol);
    PrimitiveStroke {
        curves,
        visible,
        net_angle: angle,
        length,
        direction_code: DirectionCode::from_angle(angle),
        updown: updown_for_angle(angle),
        index,
    }
}

/// Cut the trajectory at every occurrence of every landmark location and
/// insert straight invisible strokes for the pen-drags.
pub fn segment_strokes(
    g: &Glyph,
    t: &Trajectory,
    landmarks: &[LandmarkPoint],
    cfg: &SegmentationConfig,
) -> Result<SegmentationResult> {
    cfg.validate()?;
    t.validate(g)?;
    let tol = matching_tol(g);
    let is_landmark = |p: Point| landmarks.iter().any(|l| l.location.distance(p) <= tol);

    let mut pieces: Vec<(Vec<SplineSegment>, bool)> = Vec::new();
    let mut prev_end: Option<Point> = None;
    for stroke in &t.pen_strokes {
        if let Some(a) = prev_end {
            let b = stroke.start(g);
            pieces.push((vec![SplineSegment::line(a, b)], false));
        }
        let mut current: Vec<SplineSegment> = Vec::new();
        for (k, pass) in stroke.passes.iter().enumerate() {
            let c = pass.curve(g);
            if k > 0 && is_landmark(c.start()) && !current.is_empty() {
                pieces.push((std::mem::take(&mut current), true));
            }
            let (a, b) = (c.start(), c.end());
            let mut cuts: Vec<f64> = landmarks
                .iter()
                .filter_map(|l| {
                    let (u, d) = c.closest_point(l.location);
                    let interior = l.location.distance(a) > tol && l.location.distance(b) > tol;
                    (d <= tol && interior && u > 0.0 && u < 1.0).then_some(u)
                })
                .collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|x, y| c.eval(*x).distance(c.eval(*y)) <= tol);
            let mut u0 = 0.0;
            for u in cuts {
                current.push(c.sub_curve(u0, u));
                pieces.push((std::mem::take(&mut current), true));
                u0 = u;
            }
            current.push(if u0 > 0.0 { c.sub_curve(u0, 1.0) } else { c });
        }
        pieces.push((current, true));
        prev_end = Some(stroke.end(g));
    }

    let strokes: Vec<PrimitiveStroke> = pieces
        .into_iter()
        .enumerate()
        .map(|(i, (curves, visible))| make_stroke(curves, visible, i, tol))
        .collect();
    let retraces = detect_retraces(&strokes, g.diagonal(), cfg.retrace_hausdorff_tol);
    let stroke_inventory_key = strokes
        .iter()
        .filter(|s| s.visible)
        .map(|s| s.direction_code)
        .collect();
    Ok(SegmentationResult {
        landmarks: landmarks.to_vec(),
        strokes,
        stroke_inventory_key,
        retraces,
        pen_strokes: t.pen_strokes.len(),
        config: *cfg,
    })
}

/// Detect landmarks and segment in one call.
pub fn segment(g: &Glyph, t: &Trajectory, cfg: &SegmentationConfig) -> Result<SegmentationResult> {
    let landmarks = detect_landmarks(g, t, cfg)?;
    segment_strokes(g, t, &landmarks, cfg)
}

/// Remove landmarks by index, add manual landmarks at on-path points, and
/// re-segment.
pub fn override_landmarks(
    g: &Glyph,
    t: &Trajectory,
    result: &SegmentationResult,
    add: &[Point],
    remove: &[usize],
) -> Result<SegmentationResult> {
    if let Some(&bad) = remove.iter().find(|&&i| i >= result.landmarks.len()) {
        return Err(Error::invalid(format!(
            "landmark index {bad} out of range ({} landmarks)",
            result.landmarks.len()
        )));
    }
    let tol = matching_tol(g);
    let mut landmarks: Vec<LandmarkPoint> = result
        .landmarks
        .iter()
        .enumerate()
        .filter(|(i, _)| !remove.contains(i))
        .map(|(_, l)| *l)
        .collect();
    for &q in add {
        let d = distance_to_path(g, t, q);
        if !(d <= tol) {
            return Err(Error::invalid(format!(
                "landmark ({}, {}) is {d} away from the trajectory (tolerance {tol})",
                q.x, q.y
            )));
        }
        push_unique(
            &mut landmarks,
            LandmarkPoint {
                location: q,
                kind: LandmarkKind::CurvatureExtremum,
                source: LandmarkSource::Manual,
            },
            tol,
        );
    }
    segment_strokes(g, t, &landmarks, &result.config)
}

const HAUSDORFF_SAMPLES: usize = 33;

/// Symmetric Hausdorff distance between two stroke paths, on dense samples.
pub fn stroke_hausdorff(a: &PrimitiveStroke, b: &PrimitiveStroke) -> f64 {
    let pa = a.polyline(HAUSDORFF_SAMPLES);
    let pb = b.polyline(HAUSDORFF_SAMPLES);
    let one_way = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|&p| point_polyline_distance(p, to))
            .fold(0.0, f64::max)
    };
    one_way(&pa, &pb).max(one_way(&pb, &pa))
}

/// Consecutive visible stroke pairs where the second retraces the first.
pub fn detect_retraces(strokes: &[PrimitiveStroke], diagonal: f64, hausdorff_tol: f64) -> Vec<(usize, usize)> {
    let limit = hausdorff_tol * diagonal;
    strokes
        .windows(2)
        .enumerate()
        .filter(|(_, w)| {
            w[0].visible
                && w[1].visible
                && w[0].net_vector().dot(w[1].net_vector()) < 0.0
                && stroke_hausdorff(&w[0], &w[1]) <= limit
        })
        .map(|(i, _)| (i, i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glyph::{DirectedPass, PenStroke, Provenance};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn unistroke(id: &str, segs: Vec<SplineSegment>) -> (Glyph, Trajectory) {
        let n = segs.len();
        let g = Glyph::new(id, "t", segs);
        let t = Trajectory::new(
            id,
            vec![PenStroke::new((0..n).map(DirectedPass::forward).collect())],
            Provenance::Recorded,
        );
        (g, t)
    }

    #[test]
    fn straight_stroke_has_no_landmarks() {
        let (g, t) = unistroke("i", vec![SplineSegment::line(p(0.0, 1.0), p(0.0, 0.0))]);
        let r = segment(&g, &t, &SegmentationConfig::default()).unwrap();
        assert!(r.landmarks.is_empty());
        assert_eq!(r.strokes.len(), 1);
        assert_eq!(r.strokes[0].direction_code, DirectionCode::S);
        assert_eq!(r.strokes[0].updown, UpDown::Down);
    }

    #[test]
    fn l_corner_is_sharp() {
        let (g, t) = unistroke(
            "l",
            vec![
                SplineSegment::line(p(0.0, 1.0), p(0.0, 0.0)),
                SplineSegment::line(p(0.0, 0.0), p(0.6, 0.0)),
            ],
        );
        let r = segment(&g, &t, &SegmentationConfig::default()).unwrap();
        assert_eq!(r.landmarks.len(), 1);
        assert_eq!(r.landmarks[0].kind, LandmarkKind::SharpJunction);
        assert!(r.landmarks[0].location.distance(p(0.0, 0.0)) < 1e-12);
        assert_eq!(r.strokes.len(), 2);
    }

    #[test]
    fn pen_drag_between_pen_strokes() {
        let g = Glyph::new(
            "ii",
            "t",
            vec![
                SplineSegment::line(p(0.0, 1.0), p(0.0, 0.0)),
                SplineSegment::line(p(1.0, 1.0), p(1.0, 0.0)),
            ],
        );
        let t = Trajectory::new(
            "ii",
            vec![
                PenStroke::new(vec![DirectedPass::forward(0)]),
                PenStroke::new(vec![DirectedPass::forward(1)]),
            ],
            Provenance::Recorded,
        );
        let r = segment(&g, &t, &SegmentationConfig::default()).unwrap();
        assert_eq!(r.strokes.len(), 3);
        assert!(!r.strokes[1].visible);
        assert_eq!(r.landmarks_of(LandmarkKind::PenEvent), 1);
        assert!((r.strokes[1].length - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn updown_boundaries() {
        assert_eq!(updown_for_angle(210.0), UpDown::Down);
        assert_eq!(updown_for_angle(330.0), UpDown::Down);
        assert_eq!(updown_for_angle(209.999), UpDown::Up);
        assert_eq!(updown_for_angle(90.0), UpDown::Up);
    }

    #[test]
    fn manual_override() {
        let (g, t) = unistroke("i", vec![SplineSegment::line(p(0.0, 1.0), p(0.0, 0.0))]);
        let r = segment(&g, &t, &SegmentationConfig::default()).unwrap();
        let added = override_landmarks(&g, &t, &r, &[p(0.0, 0.5)], &[]).unwrap();
        assert_eq!(added.strokes.len(), 2);
        assert_eq!(added.landmarks[0].source, LandmarkSource::Manual);
        let removed = override_landmarks(&g, &t, &added, &[], &[0]).unwrap();
        assert_eq!(removed.strokes.len(), 1);
        let off = 5.0 * g.tolerance();
        assert!(override_landmarks(&g, &t, &r, &[p(off, 0.5)], &[]).is_err());
        assert!(override_landmarks(&g, &t, &r, &[], &[0]).is_err());
    }
}
