//! Brute-force reference implementations shared by the test targets.
#![allow(dead_code)]

use glyphometrics::geometry::{Point, SplineSegment};
use glyphometrics::reconstruct::CostWeights;
use glyphometrics::{DirectedPass, Glyph, PenStroke, Provenance, Trajectory};

pub fn brute_hull_vertices(pts: &[Point]) -> Vec<Point> {
    let mut verts = Vec::new();
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if pts[i] == pts[j] {
                continue;
            }
            let (a, b) = (pts[i], pts[j]);
            let ok = pts.iter().all(|&q| {
                let c = (b - a).cross(q - a);
                if c > 0.0 {
                    true
                } else if c < 0.0 {
                    false
                } else {
                    // collinear: must lie within the closed segment
                    let t = (q - a).dot(b - a) / (b - a).norm_squared();
                    (0.0..=1.0).contains(&t)
                }
            });
            if ok {
                for v in [a, b] {
                    if !verts.contains(&v) {
                        verts.push(v);
                    }
                }
            }
        }
    }
    if verts.is_empty() && !pts.is_empty() {
        verts.push(pts[0]);
    }
    verts
}

pub fn brute_min_circle(pts: &[Point]) -> f64 {
    let contains_all = |c: Point, r: f64| pts.iter().all(|q| c.distance(*q) <= r + 1e-9);
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let c = pts[i].midpoint(pts[j]);
            let r = c.distance(pts[i]);
            if r < best && contains_all(c, r) {
                best = r;
            }
            for k in j + 1..pts.len() {
                let (a, b, cc) = (pts[i], pts[j], pts[k]);
                let d = 2.0 * (a.x * (b.y - cc.y) + b.x * (cc.y - a.y) + cc.x * (a.y - b.y));
                if d.abs() < 1e-12 {
                    continue;
                }
                let a2 = a.norm_squared();
                let b2 = b.norm_squared();
                let c2 = cc.norm_squared();
                let ux = (a2 * (b.y - cc.y) + b2 * (cc.y - a.y) + c2 * (a.y - b.y)) / d;
                let uy = (a2 * (cc.x - b.x) + b2 * (a.x - cc.x) + c2 * (b.x - a.x)) / d;
                let center = Point::new(ux, uy);
                let r = center.distance(a);
                if r < best && contains_all(center, r) {
                    best = r;
                }
            }
        }
    }
    best
}

/// Largest distance from any input point to the simplified polyline,
/// checking every point against every simplified segment.
pub fn brute_max_deviation(points: &[Point], simplified: &[Point]) -> f64 {
    let seg_dist = |q: Point, a: Point, b: Point| {
        let ab = b - a;
        let l2 = ab.dot(ab);
        if l2 == 0.0 {
            return q.distance(a);
        }
        let t = ((q - a).dot(ab) / l2).clamp(0.0, 1.0);
        q.distance(a + ab * t)
    };
    points
        .iter()
        .map(|&q| {
            if simplified.len() == 1 {
                return q.distance(simplified[0]);
            }
            simplified
                .windows(2)
                .map(|w| seg_dist(q, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Minimum alignment cost over every monotone warping path, enumerated
/// recursively without memoization.
pub fn dtw_exhaustive(a: &[f64], b: &[f64]) -> f64 {
    fn go(a: &[f64], b: &[f64], i: usize, j: usize) -> f64 {
        let here = (a[i] - b[j]).abs();
        if i + 1 == a.len() && j + 1 == b.len() {
            return here;
        }
        let mut best = f64::INFINITY;
        if i + 1 < a.len() {
            best = best.min(go(a, b, i + 1, j));
        }
        if j + 1 < b.len() {
            best = best.min(go(a, b, i, j + 1));
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            best = best.min(go(a, b, i + 1, j + 1));
        }
        here + best
    }
    go(a, b, 0, 0)
}

fn angle_deg(u: Point, v: Point) -> f64 {
    let c = u.x * v.x + u.y * v.y;
    let s = u.x * v.y - u.y * v.x;
    s.abs().atan2(c).to_degrees()
}

#[derive(Clone, Copy)]
struct Pass {
    from: Point,
    to: Point,
    t_in: Point,
    t_out: Point,
    length: f64,
}

fn directed(s: &SplineSegment, reversed: bool) -> Pass {
    let (t0, t1) = (s.tangent(0.0), s.tangent(1.0));
    if reversed {
        Pass {
            from: s.end(),
            to: s.start(),
            t_in: -t1,
            t_out: -t0,
            length: s.arc_length(),
        }
    } else {
        Pass {
            from: s.start(),
            to: s.end(),
            t_in: t0,
            t_out: t1,
            length: s.arc_length(),
        }
    }
}

/// Preferred first pen-down point: top-most then left-most free end.
fn preferred_start(g: &Glyph, tol: f64) -> Point {
    let ends: Vec<Point> = g.segments.iter().flat_map(|s| [s.start(), s.end()]).collect();
    let degree = |p: Point| ends.iter().filter(|q| q.distance(p) <= tol).count();
    let free: Vec<Point> = ends.iter().copied().filter(|&p| degree(p) == 1).collect();
    let pool = if free.is_empty() { ends } else { free };
    let mut best = pool[0];
    for &p in &pool[1..] {
        let better = if (p.y - best.y).abs() > tol {
            p.y > best.y
        } else {
            p.x < best.x - tol
        };
        if better {
            best = p;
        }
    }
    best
}

/// Minimum reconstruction score over every traversal, by dynamic
/// programming over (segments used, last step). A step is a directed pass,
/// optionally retraced back to its start.
pub fn min_reconstruction_score(g: &Glyph, w: &CostWeights) -> f64 {
    let n = g.segments.len();
    assert!(n <= 12);
    let tol = g.tolerance();
    let diag = g.diagonal();
    let start = preferred_start(g, tol);
    // step index: 4 * seg + 2 * reversed + retrace
    let steps: Vec<(usize, Pass, bool)> = (0..n)
        .flat_map(|s| {
            let seg = &g.segments[s];
            [(false, false), (false, true), (true, false), (true, true)]
                .map(|(rev, ret)| (s, directed(seg, rev), ret))
        })
        .collect();
    let own_cost = |&(_, p, ret): &(usize, Pass, bool)| {
        if ret {
            w.turn_cost_per_degree * 180.0 + w.retrace_cost_per_length * p.length / diag
        } else {
            0.0
        }
    };
    let exit = |&(_, p, ret): &(usize, Pass, bool)| if ret { (p.from, -p.t_in) } else { (p.to, p.t_out) };
    let full = (1usize << n) - 1;
    let mut dp = vec![vec![f64::INFINITY; steps.len()]; 1 << n];
    for (k, st) in steps.iter().enumerate() {
        let p = st.1;
        let bad_dir = p.t_in.x <= 1e-9 && p.t_in.y >= -1e-9;
        let misses = usize::from(p.from.distance(start) > tol) + usize::from(bad_dir);
        dp[1 << st.0][k] = w.start_prior_cost * misses as f64 + own_cost(st);
    }
    for mask in 1..=full {
        for k in 0..steps.len() {
            let cur = dp[mask][k];
            if !cur.is_finite() {
                continue;
            }
            let (node, tangent) = exit(&steps[k]);
            for (k2, st) in steps.iter().enumerate() {
                if mask & (1 << st.0) != 0 {
                    continue;
                }
                let joined = st.1.from.distance(node) <= tol;
                let link = if joined {
                    w.turn_cost_per_degree * angle_deg(tangent, st.1.t_in)
                } else if steps[k].2 {
                    continue;
                } else {
                    w.pen_up_cost
                };
                let m2 = mask | (1 << st.0);
                let c = cur + link + own_cost(st);
                if c < dp[m2][k2] {
                    dp[m2][k2] = c;
                }
            }
        }
    }
    (0..steps.len())
        .filter(|&k| !steps[k].2)
        .map(|k| dp[full][k])
        .fold(f64::INFINITY, f64::min)
}

/// Every traversal as a trajectory, for tiny glyphs.
pub fn all_traversals(g: &Glyph) -> Vec<Trajectory> {
    let n = g.segments.len();
    assert!(n <= 5);
    let tol = g.tolerance();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |order| {
        for bits in 0..(1u32 << (2 * n)) {
            let mut passes: Vec<(DirectedPass, bool)> = Vec::new();
            for (i, &s) in order.iter().enumerate() {
                let rev = bits & (1 << (2 * i)) != 0;
                let ret = bits & (1 << (2 * i + 1)) != 0;
                let p = DirectedPass {
                    segment_index: s,
                    reversed: rev,
                    retrace: false,
                };
                passes.push((p, false));
                if ret {
                    passes.push((p.retraced(), true));
                }
            }
            if passes.last().is_some_and(|p| p.1) {
                continue;
            }
            let mut strokes: Vec<Vec<DirectedPass>> = vec![vec![passes[0].0]];
            let mut ok = true;
            for w in passes.windows(2) {
                let joined = w[0].0.end(g).distance(w[1].0.start(g)) <= tol;
                if joined {
                    strokes.last_mut().unwrap().push(w[1].0);
                } else if w[0].1 {
                    ok = false;
                    break;
                } else {
                    strokes.push(vec![w[1].0]);
                }
            }
            if ok {
                out.push(Trajectory::new(
                    g.id.clone(),
                    strokes.into_iter().map(PenStroke::new).collect(),
                    Provenance::Reconstructed,
                ));
            }
        }
    });
    out
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}
