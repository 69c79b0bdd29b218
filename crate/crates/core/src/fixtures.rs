//! Bundled example glyphs and synthetic corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, SplineSegment};
use crate::glyph::{DirectedPass, Glyph, PenStroke, Provenance, ScriptCorpus, Trajectory};
use crate::io::CorpusDocument;

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn clamped(points: &[(f64, f64)]) -> SplineSegment {
    SplineSegment::clamped(points.iter().map(|&(x, y)| p(x, y)).collect())
        .expect("fixture control points are valid")
}

fn clamped_quadratic(points: &[(f64, f64)]) -> SplineSegment {
    let spans = points.len() - 2;
    let mut knots = vec![0.0; 3];
    knots.extend((1..spans).map(|i| i as f64 / spans as f64));
    knots.extend([1.0; 3]);
    SplineSegment::new(2, points.iter().map(|&(x, y)| p(x, y)).collect(), knots)
        .expect("fixture control points are valid")
}

/// The worked character: one pen stroke up a stem, out to a short bar that is
/// traced back, then down a wavy tail with four bends.
pub fn worked_character() -> (Glyph, Trajectory) {
    let p0 = p(-0.6, 0.0);
    let p1 = p(0.0, 2.0);
    let p2 = p(1.0, 2.0);
    let tail = clamped(&[
        (0.0, 2.0),
        (0.0, 1.6),
        (0.25, 1.35),
        (0.05, 1.0),
        (0.0, 0.45),
        (-0.1, 0.2),
        (-0.3, 0.35),
        (-0.5, 0.75),
        (-0.7, 1.05),
        (-0.45, 1.05),
        (0.1, 0.35),
        (0.6, 0.0),
        (0.3, -0.25),
        (0.0, -0.7),
    ]);
    let g = Glyph::new(
        "worked",
        "fixtures",
        vec![SplineSegment::line(p0, p1), SplineSegment::line(p1, p2), tail],
    )
    .with_baseline(0.0)
    .with_label("worked character");
    let t = Trajectory::new(
        "worked",
        vec![PenStroke::new(vec![
            DirectedPass::forward(0),
            DirectedPass::forward(1),
            DirectedPass::forward(1).retraced(),
            DirectedPass::forward(2),
        ])],
        Provenance::Recorded,
    );
    (g, t)
}

fn unistroke(id: &str, segments: Vec<SplineSegment>) -> (Glyph, Trajectory) {
    let n = segments.len();
    let g = Glyph::new(id, "fixtures", segments);
    let t = Trajectory::new(
        id,
        vec![PenStroke::new((0..n).map(DirectedPass::forward).collect())],
        Provenance::Recorded,
    );
    (g, t)
}

/// A single downward stroke of length 1.
pub fn straight() -> (Glyph, Trajectory) {
    unistroke("straight", vec![SplineSegment::line(p(0.0, 1.0), p(0.0, 0.0))])
}

/// Down then right, with a right-angle corner.
pub fn l_shape() -> (Glyph, Trajectory) {
    unistroke(
        "ell",
        vec![
            SplineSegment::line(p(0.0, 1.0), p(0.0, 0.0)),
            SplineSegment::line(p(0.0, 0.0), p(0.6, 0.0)),
        ],
    )
}

/// One quadratic segment with two tight bends of opposite turning direction.
pub fn s_curve() -> (Glyph, Trajectory) {
    unistroke(
        "ess",
        vec![clamped_quadratic(&[
            (1.0, 2.0),
            (0.15, 2.0),
            (0.0, 2.0),
            (0.075, 1.85),
            (0.925, 0.15),
            (1.0, 0.0),
            (0.85, 0.0),
            (0.0, 0.0),
        ])],
    )
}

/// Unit square outline drawn counterclockwise from the origin.
pub fn unit_square() -> (Glyph, Trajectory) {
    let c = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
    unistroke(
        "square",
        (0..4).map(|i| SplineSegment::line(c[i], c[(i + 1) % 4])).collect(),
    )
}

/// Closed circle of the given radius centered on the origin.
pub fn circle(radius: f64) -> (Glyph, Trajectory) {
    unistroke("circle", vec![SplineSegment::circle(Point::ORIGIN, radius, 32)])
}

/// Two parallel vertical strokes one unit apart.
pub fn two_strokes() -> (Glyph, Trajectory) {
    let g = Glyph::new(
        "double",
        "fixtures",
        vec![
            SplineSegment::line(p(0.0, 1.0), p(0.0, 0.0)),
            SplineSegment::line(p(1.0, 1.0), p(1.0, 0.0)),
        ],
    );
    let t = Trajectory::new(
        "double",
        vec![
            PenStroke::new(vec![DirectedPass::forward(0)]),
            PenStroke::new(vec![DirectedPass::forward(1)]),
        ],
        Provenance::Recorded,
    );
    (g, t)
}

/// Two crossing diagonals written as separate pen strokes.
pub fn cross() -> (Glyph, Trajectory) {
    let g = Glyph::new(
        "cross",
        "fixtures",
        vec![
            SplineSegment::line(p(0.0, 1.0), p(1.0, 0.0)),
            SplineSegment::line(p(1.0, 1.0), p(0.0, 0.0)),
        ],
    );
    let t = Trajectory::new(
        "cross",
        vec![
            PenStroke::new(vec![DirectedPass::forward(0)]),
            PenStroke::new(vec![DirectedPass::forward(1)]),
        ],
        Provenance::Recorded,
    );
    (g, t)
}

/// Every bundled fixture with its recorded trajectory.
pub fn all() -> Vec<(Glyph, Trajectory)> {
    vec![
        worked_character(),
        straight(),
        l_shape(),
        s_curve(),
        unit_square(),
        circle(1.0),
        two_strokes(),
        cross(),
    ]
}

/// The bundled fixtures as one corpus document.
pub fn fixture_document() -> CorpusDocument {
    let items = all();
    let corpus = ScriptCorpus {
        id: "fixtures".into(),
        name: "Bundled fixtures".into(),
        glyphs: items.iter().map(|(g, _)| g.clone()).collect(),
        baseline_y: Some(0.0),
    };
    let mut doc = CorpusDocument::new(corpus);
    for (g, t) in items {
        doc.trajectories.insert(g.id.clone(), t);
    }
    doc
}

/// Shape parameters for the synthetic writer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WriterStyle {
    pub min_segments: usize,
    pub max_segments: usize,
    /// Probability that a segment begins with a sharp turn.
    pub sharp_turn: f64,
    /// Maximum bend within one segment, degrees.
    pub bend_deg: f64,
    /// Probability of lifting the pen before a segment.
    pub pen_up: f64,
    /// Probability that a segment closes onto an earlier junction.
    pub loop_back: f64,
    /// Probability of tracing a segment back immediately.
    pub retrace: f64,
}

impl WriterStyle {
    pub fn angular() -> Self {
        WriterStyle {
            min_segments: 2,
            max_segments: 6,
            sharp_turn: 0.6,
            bend_deg: 20.0,
            pen_up: 0.2,
            loop_back: 0.05,
            retrace: 0.1,
        }
    }

    pub fn mixed() -> Self {
        WriterStyle {
            min_segments: 2,
            max_segments: 7,
            sharp_turn: 0.35,
            bend_deg: 60.0,
            pen_up: 0.12,
            loop_back: 0.1,
            retrace: 0.05,
        }
    }

    pub fn cursive() -> Self {
        WriterStyle {
            min_segments: 3,
            max_segments: 8,
            sharp_turn: 0.1,
            bend_deg: 110.0,
            pen_up: 0.05,
            loop_back: 0.2,
            retrace: 0.02,
        }
    }
}

fn dir(deg: f64) -> Point {
    let r = deg.to_radians();
    p(r.cos(), r.sin())
}

fn bezier(a: Point, ta: Point, b: Point, tb: Point) -> SplineSegment {
    let l = a.distance(b);
    SplineSegment::clamped(vec![a, a + ta * (l / 3.0), b - tb * (l / 3.0), b])
        .expect("distinct endpoints")
}

/// Free-form writer: glyph geometry generated together with the order it
/// was written in.
pub fn random_glyph(id: &str, script_id: &str, style: &WriterStyle, rng: &mut impl Rng) -> (Glyph, Trajectory) {
    loop {
        if let Some(out) = try_random_glyph(id, script_id, style, rng, true) {
            return out;
        }
    }
}

fn try_random_glyph(
    id: &str,
    script_id: &str,
    style: &WriterStyle,
    rng: &mut impl Rng,
    allow_retrace: bool,
) -> Option<(Glyph, Trajectory)> {
    let n = rng.gen_range(style.min_segments..=style.max_segments);
    let mut segments: Vec<SplineSegment> = Vec::new();
    let mut strokes: Vec<PenStroke> = vec![PenStroke::new(Vec::new())];
    let mut nodes: Vec<Point> = Vec::new();
    let mut pos = p(rng.gen_range(-0.2..0.2), rng.gen_range(0.8..1.2));
    let mut heading: f64 = rng.gen_range(250.0..340.0);
    nodes.push(pos);
    for k in 0..n {
        if k > 0 && rng.gen_bool(style.pen_up) {
            pos = p(rng.gen_range(-0.6..1.2), rng.gen_range(-0.4..1.2));
            heading = rng.gen_range(200.0..340.0);
            if nodes.iter().any(|q| q.distance(pos) < 0.1) {
                return None;
            }
            nodes.push(pos);
            strokes.push(PenStroke::new(Vec::new()));
        } else if k > 0 && rng.gen_bool(style.sharp_turn) {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            heading += sign * rng.gen_range(100.0..160.0);
        } else {
            heading += rng.gen_range(-15.0..15.0);
        }
        let bend = rng.gen_range(-style.bend_deg..=style.bend_deg);
        let end_heading = heading + bend;
        let close_to = (k >= 2 && rng.gen_bool(style.loop_back))
            .then(|| {
                nodes
                    .iter()
                    .copied()
                    .filter(|q| q.distance(pos) > 0.3)
                    .min_by(|a, b| a.distance(pos).total_cmp(&b.distance(pos)))
            })
            .flatten();
        let (end, end_dir) = match close_to {
            Some(q) => {
                let chord = (q - pos).angle_deg();
                (q, dir(chord + 0.5 * bend.clamp(-40.0, 40.0)))
            }
            None => {
                let len = rng.gen_range(0.35..0.9);
                let e = pos + dir(0.5 * (heading + end_heading)) * len;
                if nodes.iter().any(|q| q.distance(e) < 0.1) {
                    return None;
                }
                nodes.push(e);
                (e, dir(end_heading))
            }
        };
        let seg = bezier(pos, dir(heading), end, end_dir);
        let idx = segments.len();
        segments.push(seg);
        let stroke = strokes.last_mut().expect("stroke exists");
        stroke.passes.push(DirectedPass::forward(idx));
        let can_retrace = allow_retrace && k + 1 < n && close_to.is_none();
        if can_retrace && rng.gen_bool(style.retrace) {
            stroke.passes.push(DirectedPass::forward(idx).retraced());
            heading = end_dir.angle_deg() + 180.0;
        } else {
            pos = end;
            heading = end_dir.angle_deg();
        }
    }
    let g = Glyph::new(id, script_id, segments);
    let t = Trajectory::new(id, strokes, Provenance::Recorded);
    t.validate(&g).ok()?;
    Some((g, t))
}

/// A synthetic script of `n` glyphs written in one style, with recorded
/// trajectories, a baseline at y = 0 and Zipf-like usage frequencies.
pub fn synthetic_script(id: &str, style: &WriterStyle, n: usize, seed: u64) -> CorpusDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut glyphs = Vec::with_capacity(n);
    let mut trajectories = Vec::with_capacity(n);
    for i in 0..n {
        let gid = format!("{id}-{i:03}");
        let (g, t) = random_glyph(&gid, id, style, &mut rng);
        glyphs.push(g.with_frequency(1.0 / (i + 1) as f64));
        trajectories.push(t);
    }
    let corpus = ScriptCorpus {
        id: id.into(),
        name: format!("Synthetic script {id}"),
        glyphs,
        baseline_y: Some(0.0),
    };
    let mut doc = CorpusDocument::new(corpus);
    for t in trajectories {
        doc.trajectories.insert(t.glyph_id.clone(), t);
    }
    doc
}

/// Three stages of one synthetic script drifting from angular to cursive.
pub fn synthetic_stages(n: usize, seed: u64) -> Vec<CorpusDocument> {
    [
        ("stage-a", WriterStyle::angular()),
        ("stage-b", WriterStyle::mixed()),
        ("stage-c", WriterStyle::cursive()),
    ]
    .iter()
    .enumerate()
    .map(|(i, (id, style))| synthetic_script(id, style, n, seed.wrapping_add(i as u64)))
    .collect()
}

fn reversed_stroke(s: &PenStroke) -> PenStroke {
    // a retrace pair reverses as a unit: (a, a') becomes (a'', a''')
    let mut out = Vec::with_capacity(s.passes.len());
    let mut i = s.passes.len();
    while i > 0 {
        let p = s.passes[i - 1];
        if p.retrace {
            let first = s.passes[i - 2];
            out.push(DirectedPass { retrace: false, ..first });
            out.push(first.retraced());
            i -= 2;
        } else {
            out.push(DirectedPass {
                reversed: !p.reversed,
                ..p
            });
            i -= 1;
        }
    }
    PenStroke::new(out)
}

/// Glyphs of at most 8 segments with the order a conventional writer would
/// use: minimal pen lifts, each stroke begun at its upper end, strokes taken
/// top to bottom, the first pen-down at the top-left free end.
pub fn reconstruction_suite(n: usize, seed: u64) -> Vec<(Glyph, Trajectory)> {
    let style = WriterStyle {
        min_segments: 2,
        max_segments: 8,
        sharp_turn: 0.35,
        bend_deg: 50.0,
        pen_up: 0.15,
        loop_back: 0.15,
        retrace: 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let id = format!("suite-{:02}", out.len());
        let Some((g, t)) = try_random_glyph(&id, "suite", &style, &mut rng, false) else {
            continue;
        };
        if let Some(t) = conventional_order(&g, t) {
            out.push((g, t));
        }
    }
    out
}

fn conventional_order(g: &Glyph, t: Trajectory) -> Option<Trajectory> {
    let graph = crate::reconstruct::build_segment_graph(g);
    if t.pen_strokes.len() > graph_components(&graph) {
        return None;
    }
    let mut strokes: Vec<PenStroke> = t
        .pen_strokes
        .iter()
        .map(|s| {
            let (a, b) = (s.start(g), s.end(g));
            if b.y > a.y {
                reversed_stroke(s)
            } else {
                s.clone()
            }
        })
        .collect();
    strokes.sort_by(|a, b| b.start(g).y.total_cmp(&a.start(g).y));
    let t = Trajectory::new(t.glyph_id, strokes, Provenance::Recorded);
    t.validate(g).ok()?;
    let first = t.pen_strokes[0].passes[0];
    let (start_node, _) = graph.pass_nodes(&first);
    if start_node != graph.preferred_start(g.tolerance()) {
        return None;
    }
    let tangent = first.curve(g).tangent(0.0);
    if tangent.x <= 0.0 && tangent.y >= 0.0 {
        return None;
    }
    Some(t)
}

fn graph_components(graph: &crate::reconstruct::SegmentGraph) -> usize {
    let n = graph.nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &graph.edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        parent[a] = b;
    }
    let mut roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}
