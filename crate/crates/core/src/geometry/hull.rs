//! Convex hull and minimum enclosing circle.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::point::{Circle, Point};
use crate::error::{Error, Result};

/// Convex hull as a counterclockwise polygon (Andrew's monotone chain).
///
/// Collinear boundary points are dropped. Collinear inputs give a two-point
/// hull; a single distinct point gives a one-point hull.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>> {
    if points.is_empty() {
        return Err(Error::invalid("convex hull of an empty point set"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

/// Signed shoelace area (positive for counterclockwise polygons).
pub fn polygon_area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let n = poly.len();
    0.5 * (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>()
}

/// Smallest circle containing every point (Welzl, iterative form).
///
/// Input order is shuffled with a fixed seed so the result is deterministic.
/// The returned radius is the maximum distance from the center to any input
/// point, so containment holds exactly in floating point.
pub fn min_enclosing_circle(points: &[Point]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::invalid("enclosing circle of an empty point set"));
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));

    let eps = 1e-12 * scale_of(&pts).max(1e-300);
    let inside = |c: &Circle, p: Point| c.center.distance(p) <= c.radius + eps;

    let mut c = Circle {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if inside(&c, pts[i]) {
            continue;
        }
        c = Circle {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if inside(&c, pts[j]) {
                continue;
            }
            c = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if inside(&c, pts[k]) {
                    continue;
                }
                c = circle_three(pts[i], pts[j], pts[k]).unwrap_or_else(|| {
                    // collinear: the widest pair spans the circle
                    [
                        circle_two(pts[i], pts[j]),
                        circle_two(pts[i], pts[k]),
                        circle_two(pts[j], pts[k]),
                    ]
                    .into_iter()
                    .max_by(|a, b| a.radius.total_cmp(&b.radius))
                    .unwrap()
                });
            }
        }
    }
    c.radius = pts
        .iter()
        .map(|p| c.center.distance(*p))
        .fold(0.0, f64::max);
    Ok(c)
}

fn scale_of(pts: &[Point]) -> f64 {
    pts.iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(0.0, f64::max)
}

pub(crate) fn circle_two(a: Point, b: Point) -> Circle {
    let center = a.midpoint(b);
    Circle {
        center,
        radius: center.distance(a).max(center.distance(b)),
    }
}

/// Circumcircle; `None` for (near-)collinear triples.
pub(crate) fn circle_three(a: Point, b: Point, c: Point) -> Option<Circle> {
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    let scale = (bx * bx + by * by).max(cx * cx + cy * cy);
    if d.abs() <= 1e-14 * scale {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    let radius = center
        .distance(a)
        .max(center.distance(b))
        .max(center.distance(c));
    Some(Circle { center, radius })
}
