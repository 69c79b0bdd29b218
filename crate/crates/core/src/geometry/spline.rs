//! B-spline segments: evaluation, derivatives, curvature, arc length,
//! knot insertion and least-squares fitting.
//!
//! A segment is parameterized over `t in [0, 1]`, mapped linearly onto the
//! knot domain `[knots[degree], knots[n]]` where `n` is the control-point
//! count.

use serde::{Deserialize, Serialize};

use super::point::{Point, Rect};
use crate::error::{Error, Result};

/// Highest supported degree. Cubic splines are the working representation;
/// lower degrees appear only as derivative curves.
pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineSegment {
    pub degree: usize,
    pub control_points: Vec<Point>,
    pub knots: Vec<f64>,
}

impl SplineSegment {
    /// Build and validate a segment.
    pub fn new(degree: usize, control_points: Vec<Point>, knots: Vec<f64>) -> Result<Self> {
        let s = SplineSegment {
            degree,
            control_points,
            knots,
        };
        if let Some(v) = s.violations().into_iter().next() {
            return Err(Error::invalid(v));
        }
        Ok(s)
    }

    /// Clamped uniform cubic through the given control polygon.
    ///
    /// Fewer than four control points are padded by subdividing the polygon,
    /// so the result is always cubic.
    pub fn clamped(control_points: Vec<Point>) -> Result<Self> {
        let cps = pad_control_points(control_points)?;
        let knots = clamped_uniform_knots(cps.len(), 3);
        SplineSegment::new(3, cps, knots)
    }

    /// Straight cubic segment from `a` to `b` with uniform parameterization.
    pub fn line(a: Point, b: Point) -> Self {
        let cps = (0..4).map(|i| a.lerp(b, i as f64 / 3.0)).collect();
        SplineSegment {
            degree: 3,
            control_points: cps,
            knots: clamped_uniform_knots(4, 3),
        }
    }

    /// Closed periodic cubic approximating a circle.
    ///
    /// `n` control points sit on a regular polygon whose radius is chosen so
    /// that the curve's mean radius matches `radius`.
    pub fn circle(center: Point, radius: f64, n: usize) -> Self {
        Self::circle_arc(center, radius, n, 0.0)
    }

    /// Like [`SplineSegment::circle`], rotated so the curve starts near `start_deg`.
    pub fn circle_arc(center: Point, radius: f64, n: usize, start_deg: f64) -> Self {
        let n = n.max(4);
        let step = std::f64::consts::TAU / n as f64;
        // Curve radius is R(4 + 2cos(step))/6 at knots and
        // R(46cos(step/2) + 2cos(3step/2))/48 at span midpoints; scale by
        // their mean so the curve straddles the target radius.
        let at_knot = (4.0 + 2.0 * step.cos()) / 6.0;
        let at_mid = (46.0 * (0.5 * step).cos() + 2.0 * (1.5 * step).cos()) / 48.0;
        let big_r = radius / (0.5 * (at_knot + at_mid));
        // Knot i (domain start) lands on control point index 1 after wrapping,
        // so offset by one step to start at `start_deg`.
        let phase = start_deg.to_radians() - step;
        let mut cps: Vec<Point> = (0..n)
            .map(|i| {
                let a = phase + step * i as f64;
                Point::new(center.x + big_r * a.cos(), center.y + big_r * a.sin())
            })
            .collect();
        cps.extend_from_slice(&cps.clone()[..3]);
        let knots = (0..cps.len() + 4).map(|i| i as f64).collect();
        SplineSegment {
            degree: 3,
            control_points: cps,
            knots,
        }
    }

    /// Human-readable list of invariant violations; empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.degree == 0 || self.degree > MAX_DEGREE {
            out.push(format!("degree {} not supported (1..=3)", self.degree));
            return out;
        }
        if let Some(i) = self.control_points.iter().position(|p| !p.is_finite()) {
            out.push(format!("control point {i} is not finite"));
        }
        if self.knots.iter().any(|k| !k.is_finite()) {
            out.push("knot vector contains non-finite values".into());
        }
        let n = self.control_points.len();
        if n < self.degree + 1 {
            out.push(format!(
                "{n} control points is too few for degree {}",
                self.degree
            ));
        }
        if self.knots.len() != n + self.degree + 1 {
            out.push(format!(
                "knot count {} != control points {} + degree {} + 1",
                self.knots.len(),
                n,
                self.degree
            ));
        } else if self.knots.windows(2).any(|w| w[1] < w[0]) {
            out.push("knot vector is decreasing".into());
        } else if !(self.knots[n] > self.knots[self.degree]) {
            out.push("empty parameter domain".into());
        }
        let distinct = self
            .control_points
            .iter()
            .skip(1)
            .any(|p| *p != self.control_points[0]);
        if !distinct && n > 0 {
            out.push("fewer than 2 distinct control points".into());
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    #[inline]
    fn domain(&self) -> (f64, f64) {
        (
            self.knots[self.degree],
            self.knots[self.control_points.len()],
        )
    }

    #[inline]
    fn param(&self, t: f64) -> f64 {
        let (a, b) = self.domain();
        a + t.clamp(0.0, 1.0) * (b - a)
    }

    /// Knot span index `k` with `knots[k] <= u < knots[k+1]`, restricted to the domain.
    fn span(&self, u: f64) -> usize {
        let p = self.degree;
        let n = self.control_points.len();
        if u >= self.knots[n] {
            let mut k = n - 1;
            while k > p && self.knots[k] >= self.knots[n] {
                k -= 1;
            }
            return k;
        }
        // knots[p..=n] is sorted; find last k in [p, n-1] with knots[k] <= u
        let slice = &self.knots[p..n];
        let idx = slice.partition_point(|&k| k <= u);
        (p + idx.saturating_sub(1)).min(n - 1)
    }

    fn eval_u(&self, u: f64) -> Point {
        let p = self.degree;
        let k = self.span(u);
        let mut d: Vec<Point> = (0..=p).map(|j| self.control_points[j + k - p]).collect();
        for r in 1..=p {
            for j in (r..=p).rev() {
                let i = j + k - p;
                let denom = self.knots[i + p + 1 - r] - self.knots[i];
                let alpha = if denom > 0.0 {
                    (u - self.knots[i]) / denom
                } else {
                    0.0
                };
                d[j] = d[j - 1] * (1.0 - alpha) + d[j] * alpha;
            }
        }
        d[p]
    }

    /// Position at normalized parameter `t`.
    pub fn eval(&self, t: f64) -> Point {
        self.eval_u(self.param(t))
    }

    /// Derivative curve with respect to the knot parameter `u`.
    fn derivative_u(&self) -> Option<SplineSegment> {
        let p = self.degree;
        if p == 0 {
            return None;
        }
        let cps: Vec<Point> = self
            .control_points
            .windows(2)
            .enumerate()
            .map(|(i, w)| {
                let denom = self.knots[i + p + 1] - self.knots[i + 1];
                if denom > 0.0 {
                    (w[1] - w[0]) * (p as f64 / denom)
                } else {
                    Point::ORIGIN
                }
            })
            .collect();
        Some(SplineSegment {
            degree: p - 1,
            control_points: cps,
            knots: self.knots[1..self.knots.len() - 1].to_vec(),
        })
    }

    /// Cached first and second derivatives for repeated evaluation.
    pub fn derivatives(&self) -> Derivatives<'_> {
        let (a, b) = self.domain();
        let d1 = self.derivative_u();
        let d2 = d1.as_ref().and_then(|d| d.derivative_u());
        Derivatives {
            curve: self,
            d1,
            d2,
            scale: b - a,
            min_speed: 1e-9 * self.control_polygon_length(),
        }
    }

    /// Signed curvature at `t`.
    pub fn curvature_at(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("parameter {t} outside [0, 1]")));
        }
        self.derivatives().curvature(t)
    }

    /// Arc length by adaptive Gauss-Legendre quadrature over each knot span.
    pub fn arc_length(&self) -> f64 {
        self.arc_length_between(0.0, 1.0)
    }

    /// Arc length between two normalized parameters (order-insensitive).
    pub fn arc_length_between(&self, t0: f64, t1: f64) -> f64 {
        let (t0, t1) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let ders = self.derivatives();
        let speed = |t: f64| ders.velocity(t).norm();
        // integrate piecewise between knot breakpoints, where the speed is smooth
        let mut breaks = vec![t0];
        let (a, b) = self.domain();
        for &k in &self.knots {
            let tk = (k - a) / (b - a);
            if tk > t0 && tk < t1 && breaks.last().is_some_and(|&l| tk > l) {
                breaks.push(tk);
            }
        }
        breaks.push(t1);
        breaks
            .windows(2)
            .map(|w| adaptive_gauss(&speed, w[0], w[1], 1e-12, 18))
            .sum()
    }

    /// Parameters of local maxima of `|curvature|` on a uniform sampling,
    /// keeping only peaks whose prominence exceeds `prominence`.
    ///
    /// Endpoints are never reported. Curvature below a length-relative noise
    /// floor is treated as exactly zero, so straight runs produce no peaks.
    pub fn curvature_extrema(&self, samples: usize, prominence: f64) -> Vec<f64> {
        let samples = samples.max(3);
        let profile = self.abs_curvature_profile(samples);
        peak_indices(&profile, prominence)
            .into_iter()
            .map(|i| i as f64 / (samples - 1) as f64)
            .collect()
    }

    /// `|curvature|` at `samples` uniform parameters; cusp samples read as 0.
    pub fn abs_curvature_profile(&self, samples: usize) -> Vec<f64> {
        let ders = self.derivatives();
        let floor = 1e-9 / self.control_polygon_length().max(f64::MIN_POSITIVE);
        (0..samples)
            .map(|i| {
                let t = i as f64 / (samples - 1).max(1) as f64;
                match ders.curvature(t) {
                    Ok(k) if k.abs() > floor => k.abs(),
                    _ => 0.0,
                }
            })
            .collect()
    }

    pub fn control_polygon_length(&self) -> f64 {
        self.control_points
            .windows(2)
            .map(|w| w[0].distance(w[1]))
            .sum()
    }

    pub fn start(&self) -> Point {
        self.eval(0.0)
    }

    pub fn end(&self) -> Point {
        self.eval(1.0)
    }

    /// Unit tangent in the direction of increasing `t`; falls back to the
    /// chord when the derivative vanishes.
    pub fn tangent(&self, t: f64) -> Point {
        let ders = self.derivatives();
        let mut v = ders.velocity(t);
        if v.norm() < 1e-12 * self.control_polygon_length().max(1e-300) {
            // step slightly inward and retry (clamped ends with repeated points)
            let h = if t > 0.5 { -1e-4 } else { 1e-4 };
            v = ders.velocity((t + h).clamp(0.0, 1.0));
            if v.norm() == 0.0 {
                v = self.end() - self.start();
            }
        }
        let n = v.norm();
        if n > 0.0 {
            v * (1.0 / n)
        } else {
            v
        }
    }

    /// Uniform-parameter samples including both ends.
    pub fn sample(&self, count: usize) -> Vec<Point> {
        let count = count.max(2);
        (0..count)
            .map(|i| self.eval(i as f64 / (count - 1) as f64))
            .collect()
    }

    /// Same curve traversed in the opposite direction.
    pub fn reversed(&self) -> SplineSegment {
        let (a, b) = (self.knots[0], self.knots[self.knots.len() - 1]);
        SplineSegment {
            degree: self.degree,
            control_points: self.control_points.iter().rev().copied().collect(),
            knots: self.knots.iter().rev().map(|k| a + b - k).collect(),
        }
    }

    pub fn transformed(&self, f: impl Fn(Point) -> Point) -> SplineSegment {
        SplineSegment {
            degree: self.degree,
            control_points: self.control_points.iter().map(|&p| f(p)).collect(),
            knots: self.knots.clone(),
        }
    }

    /// Insert knot `u` once (Boehm's algorithm).
    fn insert_knot(&mut self, u: f64) {
        let p = self.degree;
        let k = self.span(u);
        let old = &self.control_points;
        let mut cps = Vec::with_capacity(old.len() + 1);
        for i in 0..=old.len() {
            let q = if i + p <= k {
                old[i]
            } else if i > k {
                old[i - 1]
            } else {
                let denom = self.knots[i + p] - self.knots[i];
                let alpha = if denom > 0.0 {
                    (u - self.knots[i]) / denom
                } else {
                    0.0
                };
                old[i - 1] * (1.0 - alpha) + old[i] * alpha
            };
            cps.push(q);
        }
        self.control_points = cps;
        self.knots.insert(k + 1, u);
    }

    /// Split at knot-parameter `u` (strictly inside the domain).
    fn split_u(&self, u: f64) -> (SplineSegment, SplineSegment) {
        let p = self.degree;
        let mut s = self.clone();
        let mult = s.knots.iter().filter(|&&k| k == u).count();
        for _ in mult..p {
            s.insert_knot(u);
        }
        let j = s.knots.iter().position(|&k| k == u).expect("inserted knot");
        let left_cps = s.control_points[..j].to_vec();
        let mut left_knots = s.knots[..j + p].to_vec();
        left_knots.push(u);
        let right_cps = s.control_points[j - 1..].to_vec();
        let mut right_knots = vec![u];
        right_knots.extend_from_slice(&s.knots[j..]);
        (
            SplineSegment {
                degree: p,
                control_points: left_cps,
                knots: left_knots,
            },
            SplineSegment {
                degree: p,
                control_points: right_cps,
                knots: right_knots,
            },
        )
    }

    /// Exact sub-curve between normalized parameters `t0 < t1`.
    pub fn sub_curve(&self, t0: f64, t1: f64) -> SplineSegment {
        let (t0, t1) = (t0.clamp(0.0, 1.0), t1.clamp(0.0, 1.0));
        debug_assert!(t0 < t1);
        let u1 = self.param(t1);
        let mut s = if t1 < 1.0 {
            self.split_u(u1).0
        } else {
            self.clone()
        };
        if t0 > 0.0 {
            let u0 = self.param(t0);
            s = s.split_u(u0).1;
        }
        s
    }

    /// Tight axis-aligned bounds of the curve.
    pub fn bounding_box(&self) -> Rect {
        let mut r = Rect::from_point(self.start()).include(self.end());
        if self.degree < 2 {
            return self.control_points.iter().fold(r, |r, &p| r.include(p));
        }
        // velocity is a polynomial of degree <= 2 on each knot span
        let ders = self.derivatives();
        let (a, b) = self.domain();
        let mut breaks: Vec<f64> = self.knots[self.degree..=self.control_points.len()]
            .iter()
            .map(|&u| (u - a) / (b - a))
            .collect();
        breaks.dedup();
        for w in breaks.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let tm = 0.5 * (t0 + t1);
            r = r.include(self.eval(t1));
            let (v0, vm, v1) = (ders.velocity(t0), ders.velocity(tm), ders.velocity(t1));
            for (c, m, e) in [(v0.x, vm.x, v1.x), (v0.y, vm.y, v1.y)] {
                let qa = 2.0 * e - 4.0 * m + 2.0 * c;
                let qb = 4.0 * m - 3.0 * c - e;
                for s in quadratic_roots(qa, qb, c) {
                    if s > 0.0 && s < 1.0 {
                        r = r.include(self.eval(t0 + s * (t1 - t0)));
                    }
                }
            }
        }
        r
    }

    /// Closest point on the curve to `q`: `(t, distance)`.
    pub fn closest_point(&self, q: Point) -> (f64, f64) {
        let ders = self.derivatives();
        let n = 16 * self.control_points.len().max(4);
        let (mut best_t, mut best_d) = (0.0, f64::INFINITY);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let d = self.eval(t).distance(q);
            if d < best_d {
                best_d = d;
                best_t = t;
            }
        }
        // golden-section refinement in the bracketing cell, then Newton polish
        let h = 1.0 / n as f64;
        let (mut lo, mut hi) = ((best_t - h).max(0.0), (best_t + h).min(1.0));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let f = |t: f64| self.eval(t).distance(q);
        for _ in 0..80 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if f(a) < f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..4 {
            let c = self.eval(t) - q;
            let d1 = ders.velocity(t);
            let d2 = ders.acceleration(t);
            let num = c.dot(d1);
            let den = d1.dot(d1) + c.dot(d2);
            if den.abs() < 1e-300 {
                break;
            }
            let next = (t - num / den).clamp(0.0, 1.0);
            if f(next) <= f(t) {
                t = next;
            } else {
                break;
            }
        }
        let d = f(t);
        if d < best_d {
            (t, d)
        } else {
            (best_t, best_d)
        }
    }
}

/// First and second derivative curves with respect to normalized `t`.
pub struct Derivatives<'a> {
    curve: &'a SplineSegment,
    d1: Option<SplineSegment>,
    d2: Option<SplineSegment>,
    scale: f64,
    min_speed: f64,
}

impl Derivatives<'_> {
    pub fn position(&self, t: f64) -> Point {
        self.curve.eval(t)
    }

    pub fn velocity(&self, t: f64) -> Point {
        match &self.d1 {
            Some(d) => d.eval_u(self.curve.param(t)) * self.scale,
            None => Point::ORIGIN,
        }
    }

    pub fn acceleration(&self, t: f64) -> Point {
        match &self.d2 {
            Some(d) => d.eval_u(self.curve.param(t)) * (self.scale * self.scale),
            None => Point::ORIGIN,
        }
    }

    /// Signed curvature `(x'y'' - y'x'') / |v|^3`.
    pub fn curvature(&self, t: f64) -> Result<f64> {
        let v = self.velocity(t);
        let a = self.acceleration(t);
        let speed = v.norm();
        if speed <= self.min_speed || speed == 0.0 {
            return Err(Error::CurvatureUndefined { t });
        }
        Ok(v.cross(a) / (speed * speed * speed))
    }
}

/// Local maxima of `values` (endpoints excluded) with prominence above `min_prominence`.
///
/// Plateaus count as a single peak at their middle; prominence follows the
/// usual topographic definition restricted to the sampled range.
pub fn peak_indices(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = values.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            // walk across a possible plateau
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                peaks.push((i + j) / 2);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
        .into_iter()
        .filter(|&p| {
            let h = values[p];
            let mut left_min = h;
            for k in (0..p).rev() {
                if values[k] > h {
                    break;
                }
                left_min = left_min.min(values[k]);
            }
            let mut right_min = h;
            for &v in &values[p + 1..] {
                if v > h {
                    break;
                }
                right_min = right_min.min(v);
            }
            h - left_min.max(right_min) > min_prominence
        })
        .collect()
}

/// Real roots of `a s^2 + b s + c`.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-12 * scale {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut out = vec![q / a];
    if q != 0.0 {
        out.push(c / q);
    }
    out
}


const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
    0.236_926_885_056_189_08,
];

fn gauss5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
        * h
}

fn adaptive_gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let whole = gauss5(f, a, b);
    let m = 0.5 * (a + b);
    let halves = gauss5(f, a, m) + gauss5(f, m, b);
    if depth == 0 || (whole - halves).abs() <= tol * halves.abs().max(1e-300) {
        halves
    } else {
        adaptive_gauss(f, a, m, tol, depth - 1) + adaptive_gauss(f, m, b, tol, depth - 1)
    }
}

pub(crate) fn clamped_uniform_knots(n: usize, p: usize) -> Vec<f64> {
    let spans = n - p;
    let mut k = vec![0.0; p + 1];
    for i in 1..spans {
        k.push(i as f64 / spans as f64);
    }
    k.extend(std::iter::repeat_n(1.0, p + 1));
    k
}

fn pad_control_points(mut cps: Vec<Point>) -> Result<Vec<Point>> {
    if cps.len() < 2 {
        return Err(Error::invalid("at least 2 control points required"));
    }
    if cps.iter().any(|p| !p.is_finite()) {
        return Err(Error::invalid("non-finite control point"));
    }
    while cps.len() < 4 {
        // split the longest polygon edge
        let (i, _) = cps
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, w[0].distance(w[1])))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let mid = cps[i].midpoint(cps[i + 1]);
        cps.insert(i + 1, mid);
    }
    Ok(cps)
}

/// Least-squares cubic fit with knot refinement until every input point lies
/// within `max_error` of the curve.
///
/// End points are interpolated. Uses chord-length parameterization with a few
/// rounds of parameter correction per knot configuration.
pub fn fit_spline(points: &[Point], max_error: f64) -> Result<SplineSegment> {
    if points.len() < 2 {
        return Err(Error::invalid("fit_spline needs at least 2 points"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::invalid("fit_spline input has non-finite coordinates"));
    }
    if !(max_error > 0.0) {
        return Err(Error::invalid("max_error must be positive"));
    }
    // drop consecutive duplicates; they carry no shape information
    let mut pts: Vec<Point> = Vec::with_capacity(points.len());
    for &p in points {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    if pts.len() < 2 {
        return Err(Error::invalid("fit_spline needs at least 2 distinct points"));
    }
    if pts.len() == 2 {
        return Ok(SplineSegment::line(pts[0], pts[1]));
    }
    let mut params = chord_params(&pts);
    let mut interior: Vec<f64> = Vec::new();
    let max_interior = pts.len().saturating_sub(4) + 8;
    let mut best: Option<(f64, SplineSegment)> = None;
    loop {
        let mut knots = vec![0.0; 4];
        knots.extend_from_slice(&interior);
        knots.extend([1.0; 4]);
        let mut curve = least_squares(&pts, &params, &knots)?;
        for _ in 0..4 {
            for (i, p) in pts.iter().enumerate().skip(1).take(pts.len() - 2) {
                params[i] = refine_param(&curve, *p, params[i]);
            }
            curve = least_squares(&pts, &params, &knots)?;
        }
        let errs: Vec<f64> = pts.iter().map(|&p| curve.closest_point(p).1).collect();
        let worst = errs.iter().cloned().fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(e, _)| worst < *e) {
            best = Some((worst, curve.clone()));
        }
        if worst <= max_error || interior.len() >= max_interior {
            break;
        }
        // split every span holding an out-of-tolerance point at its midpoint
        let mut bounds = vec![0.0];
        bounds.extend_from_slice(&interior);
        bounds.push(1.0);
        let mut added = Vec::new();
        for w in bounds.windows(2) {
            let bad = params
                .iter()
                .zip(&errs)
                .any(|(&t, &e)| t >= w[0] && t <= w[1] && e > max_error);
            if bad {
                added.push(0.5 * (w[0] + w[1]));
            }
        }
        if added.is_empty() {
            break;
        }
        interior.extend(added);
        interior.sort_by(f64::total_cmp);
        params = chord_params(&pts);
    }
    let (err, curve) = best.expect("at least one fit");
    if err > max_error {
        return Err(Error::invalid(format!(
            "could not fit within {max_error} (best {err})"
        )));
    }
    Ok(curve)
}

fn chord_params(pts: &[Point]) -> Vec<f64> {
    let mut acc = vec![0.0];
    for w in pts.windows(2) {
        let last = *acc.last().unwrap();
        acc.push(last + w[0].distance(w[1]));
    }
    let total = *acc.last().unwrap();
    acc.iter().map(|a| a / total).collect()
}

fn refine_param(curve: &SplineSegment, p: Point, t: f64) -> f64 {
    let ders = curve.derivatives();
    let c = curve.eval(t) - p;
    let d1 = ders.velocity(t);
    let d2 = ders.acceleration(t);
    let den = d1.dot(d1) + c.dot(d2);
    if den.abs() < 1e-300 {
        return t;
    }
    (t - c.dot(d1) / den).clamp(0.0, 1.0)
}

fn basis_functions(knots: &[f64], n: usize, u: f64) -> Vec<f64> {
    // evaluate each basis function by de Boor on a unit control vector
    let probe = SplineSegment {
        degree: 3,
        control_points: vec![Point::ORIGIN; n],
        knots: knots.to_vec(),
    };
    (0..n)
        .map(|i| {
            let mut s = probe.clone();
            s.control_points[i] = Point::new(1.0, 0.0);
            s.eval_u(u).x
        })
        .collect()
}

fn least_squares(pts: &[Point], params: &[f64], knots: &[f64]) -> Result<SplineSegment> {
    use nalgebra::{DMatrix, DVector};
    let n = knots.len() - 4;
    let m = pts.len();
    let (first, last) = (pts[0], pts[m - 1]);
    let rows: Vec<Vec<f64>> = params.iter().map(|&u| basis_functions(knots, n, u)).collect();
    let mut cps = vec![first; n];
    cps[n - 1] = last;
    if n > 2 && m > 2 {
        let free = n - 2;
        let a = DMatrix::from_fn(m - 2, free, |r, c| rows[r + 1][c + 1]);
        let rhs = |f: fn(Point) -> f64| {
            DVector::from_fn(m - 2, |r, _| {
                let row = &rows[r + 1];
                f(pts[r + 1]) - row[0] * f(first) - row[n - 1] * f(last)
            })
        };
        let svd = a.svd(true, true);
        let sx = svd
            .solve(&rhs(|p| p.x), 1e-12)
            .map_err(|e| Error::invalid(format!("least squares failed: {e}")))?;
        let sy = svd
            .solve(&rhs(|p| p.y), 1e-12)
            .map_err(|e| Error::invalid(format!("least squares failed: {e}")))?;
        for c in 0..free {
            cps[c + 1] = Point::new(sx[c], sy[c]);
        }
    } else {
        for (i, cp) in cps.iter_mut().enumerate() {
            *cp = first.lerp(last, i as f64 / (n - 1) as f64);
        }
    }
    Ok(SplineSegment {
        degree: 3,
        control_points: cps,
        knots: knots.to_vec(),
    })
}
