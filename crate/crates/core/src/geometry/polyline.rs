//! Polyline simplification and crossing counts.

use super::point::Point;
use crate::error::{Error, Result};

/// Distance from `p` to the closed segment `a..b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Distance from `p` to a polyline.
pub fn point_polyline_distance(p: Point, line: &[Point]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [a] => p.distance(*a),
        _ => line
            .windows(2)
            .map(|w| point_segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Ramer-Douglas-Peucker simplification.
///
/// Keeps both endpoints; every dropped point lies within `epsilon` of the
/// output polyline.
pub fn rdp_simplify(points: &[Point], epsilon: f64) -> Result<Vec<Point>> {
    if points.len() < 2 {
        return Err(Error::invalid("rdp needs at least 2 points"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("rdp epsilon must be positive"));
    }
    Ok(rdp_indices(points, epsilon)
        .into_iter()
        .map(|i| points[i])
        .collect())
}

/// Indices kept by RDP, in order.
pub fn rdp_indices(points: &[Point], epsilon: f64) -> Vec<usize> {
    let n = points.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let (mut far, mut far_d) = (lo, -1.0);
        for i in lo + 1..hi {
            let d = point_segment_distance(points[i], points[lo], points[hi]);
            if d > far_d {
                far = i;
                far_d = d;
            }
        }
        if far_d > epsilon {
            keep[far] = true;
            stack.push((lo, far));
            stack.push((far, hi));
        }
    }
    (0..n).filter(|&i| keep[i]).collect()
}

/// Intersection of segments `p1..p2` and `q1..q2` when they cross at a single
/// point (touching included, parallel/collinear overlap excluded).
pub fn segment_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Option<Point> {
    let r = p2 - p1;
    let s = q2 - q1;
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    if scale == 0.0 || denom.abs() <= 1e-12 * scale {
        return None;
    }
    let qp = q1 - p1;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let tol = 1e-12;
    if (-tol..=1.0 + tol).contains(&t) && (-tol..=1.0 + tol).contains(&u) {
        Some(p1 + r * t.clamp(0.0, 1.0))
    } else {
        None
    }
}

/// Number of distinct crossing points among a set of polylines.
///
/// Segment pairs that are consecutive in the same polyline (or share the
/// closing vertex of a closed polyline) are never tested. Intersections
/// located at a polyline's first or last vertex are junctions, not
/// crossings. Points closer than `tol` are counted once.
pub fn count_crossings_with_tol(polylines: &[Vec<Point>], tol: f64) -> usize {
    struct Seg {
        line: usize,
        idx: usize,
        a: Point,
        b: Point,
    }
    let mut segs = Vec::new();
    let mut terminals = Vec::new();
    for (li, line) in polylines.iter().enumerate() {
        if line.len() < 2 {
            continue;
        }
        terminals.push(line[0]);
        terminals.push(line[line.len() - 1]);
        for (idx, w) in line.windows(2).enumerate() {
            if w[0] != w[1] {
                segs.push(Seg {
                    line: li,
                    idx,
                    a: w[0],
                    b: w[1],
                });
            }
        }
    }
    let adjacent = |s: &Seg, t: &Seg| {
        if s.line != t.line {
            return false;
        }
        let line = &polylines[s.line];
        let last = line.len() - 2;
        let closed = line[0].distance(line[line.len() - 1]) <= tol;
        s.idx.abs_diff(t.idx) <= 1
            || (closed && ((s.idx == 0 && t.idx == last) || (t.idx == 0 && s.idx == last)))
    };
    segs.sort_by(|s, t| s.a.x.min(s.b.x).total_cmp(&t.a.x.min(t.b.x)));
    let mut found: Vec<Point> = Vec::new();
    for i in 0..segs.len() {
        let s = &segs[i];
        let (s_max_x, s_min_y, s_max_y) = (s.a.x.max(s.b.x), s.a.y.min(s.b.y), s.a.y.max(s.b.y));
        for t in &segs[i + 1..] {
            if t.a.x.min(t.b.x) > s_max_x + tol {
                break;
            }
            if t.a.y.min(t.b.y) > s_max_y + tol || t.a.y.max(t.b.y) < s_min_y - tol || adjacent(s, t) {
                continue;
            }
            if let Some(x) = segment_intersection(s.a, s.b, t.a, t.b) {
                if terminals.iter().any(|e| e.distance(x) <= tol) {
                    continue;
                }
                if !found.iter().any(|f| f.distance(x) <= tol) {
                    found.push(x);
                }
            }
        }
    }
    found.len()
}

/// [`count_crossings_with_tol`] with a tolerance of 1e-6 of the input's
/// bounding-box diagonal.
pub fn count_crossings(polylines: &[Vec<Point>]) -> usize {
    let bbox = super::point::Rect::from_points(polylines.iter().flatten().copied());
    let tol = bbox.map(|r| 1e-6 * r.diagonal()).unwrap_or(0.0);
    count_crossings_with_tol(polylines, tol)
}
