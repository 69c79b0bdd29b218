//! Per-character visual, dynamic and cognitive metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    angle_between_deg, convex_hull, count_crossings, min_enclosing_circle, normalize_deg,
    polygon_area, rdp_simplify, Point, SplineSegment, DEFAULT_CURVATURE_SAMPLES,
};
use crate::glyph::{DirectionCode, Glyph, LandmarkKind, NormalizeMode, PrimitiveStroke, Trajectory, UpDown};
use crate::segment::SegmentationResult;

/// Samples per curve when a stroke is flattened to a polyline.
pub const POLYLINE_SAMPLES: usize = 64;
pub const DEFAULT_RESAMPLE: usize = 64;

/// A metric value or the reason it has none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measured<T> {
    Value(T),
    Undefined(String),
}

impl<T: Copy> Measured<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            Measured::Value(v) => Some(*v),
            Measured::Undefined(_) => None,
        }
    }
}

impl<T> From<Result<T>> for Measured<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Measured::Value(v),
            Err(e) => Measured::Undefined(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrokeCounts {
    pub primitive: usize,
    pub pen_strokes: usize,
    pub disjointed: usize,
    pub retraces: usize,
    pub upstrokes: usize,
    pub downstrokes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleMetrics {
    pub major_angle_deg: f64,
    pub initial_angle_deg: f64,
    pub divergence_angle_deg: Measured<f64>,
    pub pen_drag_angles_deg: Vec<f64>,
    /// Counterclockwise turn between consecutive visible strokes, in 45-degree bins.
    pub inter_stroke_histogram: [usize; 8],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub glyph_id: String,
    pub length: f64,
    pub divergence: f64,
    pub size: f64,
    pub lb_index: Measured<f64>,
    pub avg_curvature: f64,
    pub compactness: Measured<f64>,
    pub openness: Measured<f64>,
    pub ascendancy_pct: Measured<f64>,
    pub descendance_pct: Measured<f64>,
    pub circularity: Measured<f64>,
    pub rectangularity: Measured<f64>,
    pub inter_stroke_angle_sum_deg: f64,
    pub crossings: usize,
    pub counts: StrokeCounts,
    pub avg_stroke_length: f64,
    pub stroke_length_list: Vec<f64>,
    pub changeability: Measured<f64>,
    pub disfluency: usize,
    pub disjoint_count: usize,
    pub entropy_nats: f64,
    pub pen_drag_distance: f64,
    pub landmark_count: usize,
    pub rdp_point_count: usize,
    pub angles: AngleMetrics,
}

impl MetricRecord {
    /// Every scalar metric by flat name, sorted by name; `None` where undefined.
    pub fn scalars(&self) -> Vec<(&'static str, Option<f64>)> {
        let c = &self.counts;
        let a = &self.angles;
        let mut v = vec![
            ("ascendancy_pct", self.ascendancy_pct.value()),
            ("avg_curvature", Some(self.avg_curvature)),
            ("avg_stroke_length", Some(self.avg_stroke_length)),
            ("changeability", self.changeability.value()),
            ("circularity", self.circularity.value()),
            ("compactness", self.compactness.value()),
            ("count_disjointed", Some(c.disjointed as f64)),
            ("count_downstrokes", Some(c.downstrokes as f64)),
            ("count_pen_strokes", Some(c.pen_strokes as f64)),
            ("count_primitive", Some(c.primitive as f64)),
            ("count_retraces", Some(c.retraces as f64)),
            ("count_upstrokes", Some(c.upstrokes as f64)),
            ("crossings", Some(self.crossings as f64)),
            ("descendance_pct", self.descendance_pct.value()),
            ("disfluency", Some(self.disfluency as f64)),
            ("disjoint_count", Some(self.disjoint_count as f64)),
            ("divergence", Some(self.divergence)),
            ("divergence_angle_deg", a.divergence_angle_deg.value()),
            ("entropy_nats", Some(self.entropy_nats)),
            ("initial_angle_deg", Some(a.initial_angle_deg)),
            ("inter_stroke_angle_sum_deg", Some(self.inter_stroke_angle_sum_deg)),
            ("landmark_count", Some(self.landmark_count as f64)),
            ("lb_index", self.lb_index.value()),
            ("length", Some(self.length)),
            ("major_angle_deg", Some(a.major_angle_deg)),
            ("openness", self.openness.value()),
            ("pen_drag_distance", Some(self.pen_drag_distance)),
            ("rdp_point_count", Some(self.rdp_point_count as f64)),
            ("rectangularity", self.rectangularity.value()),
            ("size", Some(self.size)),
        ];
        v.sort_by_key(|(k, _)| *k);
        v
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.scalars()
            .into_iter()
            .find(|(k, _)| *k == name)
            .and_then(|(_, v)| v)
    }

    pub fn scalar_names() -> Vec<&'static str> {
        vec![
            "ascendancy_pct",
            "avg_curvature",
            "avg_stroke_length",
            "changeability",
            "circularity",
            "compactness",
            "count_disjointed",
            "count_downstrokes",
            "count_pen_strokes",
            "count_primitive",
            "count_retraces",
            "count_upstrokes",
            "crossings",
            "descendance_pct",
            "disfluency",
            "disjoint_count",
            "divergence",
            "divergence_angle_deg",
            "entropy_nats",
            "initial_angle_deg",
            "inter_stroke_angle_sum_deg",
            "landmark_count",
            "lb_index",
            "length",
            "major_angle_deg",
            "openness",
            "pen_drag_distance",
            "rdp_point_count",
            "rectangularity",
            "size",
        ]
    }
}

/// Total path length: visible strokes plus straight pen-drags.
pub fn length(seg: &SegmentationResult) -> f64 {
    seg.strokes.iter().map(|s| s.length).sum()
}

/// Distance from the first pen-down to the last pen-up.
pub fn divergence(g: &Glyph, t: &Trajectory) -> f64 {
    t.start(g).distance(t.end(g))
}

/// Bounding-box area.
pub fn size(g: &Glyph) -> f64 {
    g.bbox().map(|r| r.area()).unwrap_or(0.0)
}

/// Bounding-box height over width.
pub fn lb_index(g: &Glyph) -> Result<f64> {
    let r = g
        .bbox()
        .ok_or_else(|| Error::undefined("lb_index", "glyph has no segments"))?;
    if r.width() <= g.tolerance() {
        return Err(Error::undefined("lb_index", "bounding box has zero width"));
    }
    Ok(r.height() / r.width())
}

fn curvature_integrals(c: &SplineSegment, samples: usize) -> (f64, f64) {
    let ders = c.derivatives();
    let n = samples.max(2) + samples % 2;
    let h = 1.0 / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=n {
        let t = i as f64 * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        if let Ok(k) = ders.curvature(t) {
            let speed = ders.velocity(t).norm();
            num += w * k.abs() * speed;
            den += w * speed;
        }
    }
    (num * h / 3.0, den * h / 3.0)
}

/// Arc-length weighted mean `|curvature|` over the visible strokes.
pub fn avg_curvature(seg: &SegmentationResult, samples: usize) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for c in seg.visible().flat_map(|s| s.curves.iter()) {
        let (a, b) = curvature_integrals(c, samples);
        num += a;
        den += b;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

pub fn compactness(length: f64, size: f64) -> Result<f64> {
    if !(size > 0.0) {
        return Err(Error::undefined("compactness", "size is zero"));
    }
    Ok(length / size)
}

pub fn openness(divergence: f64, length: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::undefined("openness", "length is zero"));
    }
    Ok(divergence / length)
}

/// Percentages of visible arc length above and below `baseline_y`; length
/// lying on the baseline is split evenly.
pub fn ascendancy_descendance(seg: &SegmentationResult, baseline_y: Option<f64>) -> Result<(f64, f64)> {
    let b = baseline_y.ok_or_else(|| Error::MetricUnavailable {
        metric: "ascendancy_descendance",
        reason: "no baseline defined".into(),
    })?;
    let (mut above, mut below, mut on) = (0.0, 0.0, 0.0);
    for s in seg.visible() {
        for w in s.polyline(4 * POLYLINE_SAMPLES).windows(2) {
            let (p, q) = (w[0], w[1]);
            let len = p.distance(q);
            let (dp, dq) = (p.y - b, q.y - b);
            if dp == 0.0 && dq == 0.0 {
                on += len;
            } else if dp >= 0.0 && dq >= 0.0 {
                above += len;
            } else if dp <= 0.0 && dq <= 0.0 {
                below += len;
            } else {
                let f = dp.abs() / (dp.abs() + dq.abs());
                let (first, second) = (len * f, len * (1.0 - f));
                if dp > 0.0 {
                    above += first;
                    below += second;
                } else {
                    below += first;
                    above += second;
                }
            }
        }
    }
    let total = above + below + on;
    if !(total > 0.0) {
        return Err(Error::undefined("ascendancy_descendance", "visible length is zero"));
    }
    Ok((
        100.0 * (above + 0.5 * on) / total,
        100.0 * (below + 0.5 * on) / total,
    ))
}

fn hull_of(g: &Glyph) -> Result<(Vec<Point>, f64)> {
    let pts: Vec<Point> = g.to_polyline(2 * POLYLINE_SAMPLES).into_iter().flatten().collect();
    let hull = convex_hull(&pts)?;
    let area = polygon_area(&hull);
    let diag = g.diagonal();
    if !(area > 1e-12 * diag * diag) {
        return Err(Error::undefined("hull area", "convex hull has zero area"));
    }
    Ok((hull, area))
}

/// Hull area over minimum-enclosing-circle area.
pub fn circularity(g: &Glyph) -> Result<f64> {
    circularity_of(&hull_of(g))
}

/// Hull area over bounding-box area.
pub fn rectangularity(g: &Glyph) -> Result<f64> {
    rectangularity_of(g, &hull_of(g))
}

fn circularity_of(hull: &Result<(Vec<Point>, f64)>) -> Result<f64> {
    let (hull, area) = hull
        .as_ref()
        .map_err(|_| Error::undefined("circularity", "convex hull has zero area"))?;
    let c = min_enclosing_circle(hull)?;
    Ok(area / c.area())
}

fn rectangularity_of(g: &Glyph, hull: &Result<(Vec<Point>, f64)>) -> Result<f64> {
    let (_, area) = hull
        .as_ref()
        .map_err(|_| Error::undefined("rectangularity", "convex hull has zero area"))?;
    let bbox = g.bbox().expect("hull exists so the glyph has segments");
    Ok((area / bbox.area()).min(1.0))
}

/// The written path as polylines for crossing tests: one per pen stroke,
/// broken wherever a retrace pass is dropped, since a retrace lies on the
/// pass it retraces.
pub fn crossing_polylines(g: &Glyph, t: &Trajectory, samples_per_curve: usize) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    for stroke in &t.pen_strokes {
        let mut cur: Vec<Point> = Vec::new();
        for pass in &stroke.passes {
            if pass.retrace {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                continue;
            }
            let pts = pass.curve(g).sample(samples_per_curve);
            let skip = usize::from(!cur.is_empty());
            cur.extend(pts.into_iter().skip(skip));
        }
        if !cur.is_empty() {
            out.push(cur);
        }
    }
    out
}

/// Sum of turn angles between consecutive visible strokes, and the number
/// of crossings among `polylines` (see [`crossing_polylines`]).
pub fn complexity_factors(seg: &SegmentationResult, polylines: &[Vec<Point>]) -> (f64, usize) {
    let vis: Vec<&PrimitiveStroke> = seg.visible().collect();
    let angle_sum = vis
        .windows(2)
        .map(|w| angle_between_deg(w[0].net_vector(), w[1].net_vector()))
        .sum();
    (angle_sum, count_crossings(polylines))
}

pub fn stroke_counts(seg: &SegmentationResult) -> StrokeCounts {
    let sharp = seg.landmarks_of(LandmarkKind::SharpJunction);
    let (mut up, mut down) = (0, 0);
    for s in seg.visible() {
        match s.updown {
            UpDown::Up => up += 1,
            UpDown::Down => down += 1,
        }
    }
    StrokeCounts {
        primitive: seg.strokes.len(),
        pen_strokes: seg.pen_strokes,
        disjointed: seg.pen_strokes + sharp,
        retraces: seg.retraces.len(),
        upstrokes: up,
        downstrokes: down,
    }
}

/// Mean and list of visible stroke lengths.
pub fn stroke_length_stats(seg: &SegmentationResult) -> Result<(f64, Vec<f64>)> {
    let list: Vec<f64> = seg.visible().map(|s| s.length).collect();
    if list.is_empty() {
        return Err(Error::invalid("no visible strokes"));
    }
    let mean = list.iter().sum::<f64>() / list.len() as f64;
    Ok((mean, list))
}

/// Up-stroke length over down-stroke length.
pub fn changeability(seg: &SegmentationResult) -> Result<f64> {
    let (mut up, mut down) = (0.0, 0.0);
    for s in seg.visible() {
        match s.updown {
            UpDown::Up => up += s.length,
            UpDown::Down => down += s.length,
        }
    }
    if !(down > 0.0) {
        return Err(Error::undefined("changeability", "no down-stroke length"));
    }
    Ok(up / down)
}

/// `(disfluency, disjoint_count)`.
pub fn disfluency(seg: &SegmentationResult) -> (usize, usize) {
    let sharp = seg.landmarks_of(LandmarkKind::SharpJunction);
    let pen = seg.landmarks_of(LandmarkKind::PenEvent);
    (seg.landmarks.len(), sharp + pen)
}

/// Shannon entropy (nats) of a code sequence.
pub fn entropy_of_codes(codes: &[DirectionCode]) -> f64 {
    if codes.is_empty() {
        return 0.0;
    }
    let mut counts = [0usize; 8];
    for c in codes {
        counts[c.ccw_index()] += 1;
    }
    let n = codes.len() as f64;
    -counts
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| {
            let p = k as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Entropy of the visible strokes' direction codes.
pub fn entropy(seg: &SegmentationResult) -> f64 {
    entropy_of_codes(&seg.stroke_inventory_key)
}

/// The longest visible stroke; near-equal lengths (a stroke and its
/// retrace) go to the earlier stroke.
pub fn major_stroke(seg: &SegmentationResult) -> Option<&PrimitiveStroke> {
    let longest = seg.visible().map(|s| s.length).fold(0.0, f64::max);
    seg.visible().find(|s| s.length >= longest * (1.0 - 1e-9))
}

pub fn angle_metrics(g: &Glyph, t: &Trajectory, seg: &SegmentationResult) -> Result<AngleMetrics> {
    let vis: Vec<&PrimitiveStroke> = seg.visible().collect();
    let first = vis.first().ok_or_else(|| Error::invalid("no visible strokes"))?;
    let major = major_stroke(seg).unwrap_or(first);
    let v = t.end(g) - t.start(g);
    let divergence_angle_deg = if v.norm() > g.tolerance() {
        Measured::Value(v.angle_deg())
    } else {
        Measured::Undefined("divergence is zero".into())
    };
    let mut hist = [0usize; 8];
    for w in vis.windows(2) {
        let turn = normalize_deg(w[1].net_angle - w[0].net_angle);
        hist[((turn / 45.0).floor() as usize).min(7)] += 1;
    }
    Ok(AngleMetrics {
        major_angle_deg: major.net_angle,
        initial_angle_deg: first.net_angle,
        divergence_angle_deg,
        pen_drag_angles_deg: seg.invisible().map(|s| s.net_angle).collect(),
        inter_stroke_histogram: hist,
    })
}

/// Total straight-line pen-drag length.
pub fn pen_drag_distance(seg: &SegmentationResult) -> f64 {
    seg.invisible().map(|s| s.length).sum()
}

/// Visible strokes grouped by pen stroke, each flattened to one polyline.
pub fn pen_stroke_polylines(seg: &SegmentationResult, samples_per_curve: usize) -> Vec<Vec<Point>> {
    let mut out: Vec<Vec<Point>> = vec![Vec::new()];
    for s in &seg.strokes {
        if !s.visible {
            out.push(Vec::new());
            continue;
        }
        let cur = out.last_mut().expect("non-empty");
        let pts = s.polyline(samples_per_curve);
        let skip = usize::from(!cur.is_empty());
        cur.extend(pts.into_iter().skip(skip));
    }
    out.retain(|l| !l.is_empty());
    out
}

/// `(landmark_count, rdp_point_count)`; landmark count includes the two
/// trajectory ends.
pub fn cognitive_counts(seg: &SegmentationResult, rdp_epsilon: f64) -> Result<(usize, usize)> {
    let mut rdp = 0;
    for line in pen_stroke_polylines(seg, POLYLINE_SAMPLES) {
        rdp += rdp_simplify(&line, rdp_epsilon)?.len();
    }
    Ok((seg.landmarks.len() + 2, rdp))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricOptions {
    pub curvature_samples: usize,
    /// RDP epsilon as a fraction of the bounding-box diagonal.
    pub rdp_epsilon_fraction: f64,
    /// Applied to the glyph before segmentation by [`crate::pipeline`].
    pub normalize: NormalizeMode,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            curvature_samples: DEFAULT_CURVATURE_SAMPLES,
            rdp_epsilon_fraction: 0.02,
            normalize: NormalizeMode::None,
        }
    }
}

/// Every metric for one glyph.
pub fn compute_all(
    g: &Glyph,
    t: &Trajectory,
    seg: &SegmentationResult,
    opts: &MetricOptions,
) -> Result<MetricRecord> {
    t.validate(g)?;
    if seg.pen_strokes != t.pen_strokes.len() || seg.strokes.is_empty() {
        return Err(Error::invalid(format!(
            "segmentation does not belong to trajectory of glyph {}",
            g.id
        )));
    }
    let len = length(seg);
    let div = divergence(g, t);
    let sz = size(g);
    let (ascendancy_pct, descendance_pct) = match ascendancy_descendance(seg, g.baseline_y) {
        Ok((a, d)) => (Measured::Value(a), Measured::Value(d)),
        Err(e) => (
            Measured::Undefined(e.to_string()),
            Measured::Undefined(e.to_string()),
        ),
    };
    let (angle_sum, crossings) = complexity_factors(seg, &crossing_polylines(g, t, POLYLINE_SAMPLES));
    let (avg_stroke_length, stroke_length_list) = stroke_length_stats(seg)?;
    let (disf, disjoint) = disfluency(seg);
    let eps = opts.rdp_epsilon_fraction * g.diagonal();
    let (landmark_count, rdp_point_count) = cognitive_counts(seg, eps)?;
    let hull = hull_of(g);
    Ok(MetricRecord {
        glyph_id: g.id.clone(),
        length: len,
        divergence: div,
        size: sz,
        lb_index: lb_index(g).into(),
        avg_curvature: avg_curvature(seg, opts.curvature_samples),
        compactness: compactness(len, sz).into(),
        openness: openness(div, len).into(),
        ascendancy_pct,
        descendance_pct,
        circularity: circularity_of(&hull).into(),
        rectangularity: rectangularity_of(g, &hull).into(),
        inter_stroke_angle_sum_deg: angle_sum,
        crossings,
        counts: stroke_counts(seg),
        avg_stroke_length,
        stroke_length_list,
        changeability: changeability(seg).into(),
        disfluency: disf,
        disjoint_count: disjoint,
        entropy_nats: entropy(seg),
        pen_drag_distance: pen_drag_distance(seg),
        landmark_count,
        rdp_point_count,
        angles: angle_metrics(g, t, seg)?,
    })
}

/// Result of a dynamic time warping alignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dtw {
    pub cost: f64,
    /// Number of aligned pairs on the optimal warping path.
    pub path_len: usize,
}

/// DTW with steps (1,1), (1,0), (0,1). Among equal-cost paths the shortest
/// is reported.
pub fn dtw<T>(a: &[T], b: &[T], cost: impl Fn(&T, &T) -> f64) -> Result<Dtw> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("dtw of an empty sequence"));
    }
    let (n, m) = (a.len(), b.len());
    let mut d = vec![(f64::INFINITY, 0usize); (n + 1) * (m + 1)];
    let at = |i: usize, j: usize| i * (m + 1) + j;
    d[0] = (0.0, 0);
    let better = |x: (f64, usize), y: (f64, usize)| match x.0.total_cmp(&y.0) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => x.1 < y.1,
        std::cmp::Ordering::Greater => false,
    };
    for i in 1..=n {
        for j in 1..=m {
            let mut best = d[at(i - 1, j - 1)];
            for cand in [d[at(i - 1, j)], d[at(i, j - 1)]] {
                if better(cand, best) {
                    best = cand;
                }
            }
            d[at(i, j)] = (best.0 + cost(&a[i - 1], &b[j - 1]), best.1 + 1);
        }
    }
    let (cost, path_len) = d[at(n, m)];
    Ok(Dtw { cost, path_len })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistinctivityMode {
    #[default]
    Trajectory,
    Static,
}

/// Shape curves in comparison order: writing order in trajectory mode,
/// storage order in static mode.
fn ordered_curves(g: &Glyph, t: Option<&Trajectory>, mode: DistinctivityMode) -> Vec<SplineSegment> {
    match (mode, t) {
        (DistinctivityMode::Trajectory, Some(t)) => t.passes().map(|p| p.curve(g)).collect(),
        _ => g.segments.clone(),
    }
}

/// `count` points evenly spaced by arc length along the concatenated curves;
/// jumps between curves add no length.
pub fn resample_by_arc_length(curves: &[SplineSegment], count: usize) -> Vec<Point> {
    let pieces: Vec<Vec<Point>> = curves.iter().map(|c| c.sample(4 * POLYLINE_SAMPLES)).collect();
    let mut segs: Vec<(Point, Point, f64)> = Vec::new();
    for piece in &pieces {
        for w in piece.windows(2) {
            segs.push((w[0], w[1], w[0].distance(w[1])));
        }
    }
    let total: f64 = segs.iter().map(|s| s.2).sum();
    let first = pieces.first().and_then(|p| p.first()).copied().unwrap_or(Point::ORIGIN);
    if count < 2 || !(total > 0.0) {
        return vec![first; count.max(1)];
    }
    let mut out = Vec::with_capacity(count);
    let (mut k, mut acc) = (0, 0.0);
    for i in 0..count {
        let target = total * i as f64 / (count - 1) as f64;
        while k + 1 < segs.len() && acc + segs[k].2 < target {
            acc += segs[k].2;
            k += 1;
        }
        let (a, b, l) = segs[k];
        let f = if l > 0.0 { ((target - acc) / l).clamp(0.0, 1.0) } else { 0.0 };
        out.push(a.lerp(b, f));
    }
    out
}

/// A glyph normalized to unit diagonal and resampled by arc length, ready
/// for [`signature_distance`].
pub fn shape_signature(
    g: &Glyph,
    t: Option<&Trajectory>,
    mode: DistinctivityMode,
    resample: usize,
) -> Result<Vec<Point>> {
    if resample < 8 {
        return Err(Error::invalid("resample must be >= 8"));
    }
    let n = g.normalize(NormalizeMode::UnitDiagonal)?;
    Ok(resample_by_arc_length(&ordered_curves(&n, t, mode), resample))
}

/// DTW cost over warping-path length.
pub fn signature_distance(a: &[Point], b: &[Point]) -> Result<f64> {
    let r = dtw(a, b, |p, q| p.distance(*q))?;
    Ok(r.cost / r.path_len as f64)
}

/// Normalized DTW distance between two glyph shapes.
pub fn distinctivity(
    a: (&Glyph, Option<&Trajectory>),
    b: (&Glyph, Option<&Trajectory>),
    mode: DistinctivityMode,
    resample: usize,
) -> Result<f64> {
    let pa = shape_signature(a.0, a.1, mode, resample)?;
    let pb = shape_signature(b.0, b.1, mode, resample)?;
    signature_distance(&pa, &pb)
}
