//! Trajectory recovery from static glyph shape.
//!
//! A traversal is a sequence of directed segment passes. Consecutive passes
//! that meet at the same graph node belong to one pen stroke; every other
//! transition is a pen-up. Each segment is passed exactly once, optionally
//! followed immediately by a reverse retrace when the pen stroke continues
//! from the retrace's end.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_between_deg, Point};
use crate::glyph::{DirectedPass, Glyph, PenStroke, Provenance, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub segment: usize,
    pub from: usize,
    pub to: usize,
}

/// Segment endpoints merged into junction nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentGraph {
    pub nodes: Vec<Point>,
    /// Edge `i` is glyph segment `i`.
    pub edges: Vec<GraphEdge>,
    /// Node to incident edge indices; a self-loop is listed once.
    pub adjacency: Vec<Vec<usize>>,
}

impl SegmentGraph {
    /// Number of edge ends at `node`; self-loops count twice.
    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node]
            .iter()
            .map(|&e| {
                let edge = self.edges[e];
                if edge.from == edge.to {
                    2
                } else {
                    1
                }
            })
            .sum()
    }

    /// Endpoint nodes of a directed pass.
    pub fn pass_nodes(&self, pass: &DirectedPass) -> (usize, usize) {
        let e = self.edges[pass.segment_index];
        if pass.reversed {
            (e.to, e.from)
        } else {
            (e.from, e.to)
        }
    }

    /// Preferred first pen-down: the top-most, then left-most, node of
    /// degree 1, or of any degree when the graph has no free ends.
    pub fn preferred_start(&self, tol: f64) -> usize {
        let ends: Vec<usize> = (0..self.nodes.len()).filter(|&n| self.degree(n) == 1).collect();
        let pool = if ends.is_empty() {
            (0..self.nodes.len()).collect()
        } else {
            ends
        };
        let better = |a: Point, b: Point| {
            if (a.y - b.y).abs() > tol {
                a.y > b.y
            } else {
                a.x < b.x - tol
            }
        };
        let mut best = pool[0];
        for &n in &pool[1..] {
            if better(self.nodes[n], self.nodes[best]) {
                best = n;
            }
        }
        best
    }
}

pub fn build_segment_graph(g: &Glyph) -> SegmentGraph {
    let tol = g.tolerance();
    let mut nodes: Vec<Point> = Vec::new();
    let node_of = |p: Point, nodes: &mut Vec<Point>| {
        match nodes.iter().position(|q| q.distance(p) <= tol) {
            Some(i) => i,
            None => {
                nodes.push(p);
                nodes.len() - 1
            }
        }
    };
    let mut edges = Vec::with_capacity(g.segments.len());
    for (i, s) in g.segments.iter().enumerate() {
        let from = node_of(s.start(), &mut nodes);
        let to = node_of(s.end(), &mut nodes);
        edges.push(GraphEdge {
            segment: i,
            from,
            to,
        });
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for e in &edges {
        adjacency[e.from].push(e.segment);
        if e.to != e.from {
            adjacency[e.to].push(e.segment);
        }
    }
    SegmentGraph {
        nodes,
        edges,
        adjacency,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub pen_up_cost: f64,
    pub turn_cost_per_degree: f64,
    /// Per unit of retraced length, measured in glyph bounding-box diagonals.
    pub retrace_cost_per_length: f64,
    pub start_prior_cost: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            pen_up_cost: 10.0,
            turn_cost_per_degree: 0.02,
            retrace_cost_per_length: 5.0,
            start_prior_cost: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReconstructionConfig {
    pub weights: CostWeights,
    pub max_candidates: usize,
    pub beam_width: usize,
    pub exhaustive_segment_limit: usize,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig {
            weights: CostWeights::default(),
            max_candidates: 5,
            beam_width: 64,
            exhaustive_segment_limit: 10,
        }
    }
}

impl ReconstructionConfig {
    pub fn validate(&self) -> Result<()> {
        let w = &self.weights;
        let ws = [
            w.pen_up_cost,
            w.turn_cost_per_degree,
            w.retrace_cost_per_length,
            w.start_prior_cost,
        ];
        if ws.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("cost weights must be finite and >= 0"));
        }
        if self.max_candidates == 0 {
            return Err(Error::invalid("max_candidates must be >= 1"));
        }
        if self.beam_width == 0 {
            return Err(Error::invalid("beam_width must be >= 1"));
        }
        Ok(())
    }
}

/// Weighted cost components; `score` is their sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub pen_up: f64,
    pub turn: f64,
    pub retrace: f64,
    pub start_prior: f64,
    pub pen_ups: usize,
    pub turn_deg: f64,
    pub retraced_length: f64,
}

impl ScoreBreakdown {
    pub fn total(&self) -> f64 {
        self.pen_up + self.turn + self.retrace + self.start_prior
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateTrajectory {
    pub trajectory: Trajectory,
    pub score: f64,
    pub score_breakdown: ScoreBreakdown,
}

/// Per directed pass geometry.
#[derive(Debug, Clone, Copy)]
struct PassGeom {
    from: usize,
    to: usize,
    start_tangent: Point,
    end_tangent: Point,
    length: f64,
}

struct Scorer<'a> {
    graph: &'a SegmentGraph,
    /// Indexed by `2 * segment + reversed`.
    passes: Vec<PassGeom>,
    weights: CostWeights,
    diagonal: f64,
    preferred_start: usize,
}

fn start_direction_penalized(t: Point) -> bool {
    // neither downward nor rightward
    t.x <= 1e-9 && t.y >= -1e-9
}

impl<'a> Scorer<'a> {
    fn new(g: &Glyph, graph: &'a SegmentGraph, weights: CostWeights) -> Self {
        let mut passes = Vec::with_capacity(2 * g.segments.len());
        for (i, s) in g.segments.iter().enumerate() {
            let e = graph.edges[i];
            let (t0, t1) = (s.tangent(0.0), s.tangent(1.0));
            let length = s.arc_length();
            passes.push(PassGeom {
                from: e.from,
                to: e.to,
                start_tangent: t0,
                end_tangent: t1,
                length,
            });
            passes.push(PassGeom {
                from: e.to,
                to: e.from,
                start_tangent: -t1,
                end_tangent: -t0,
                length,
            });
        }
        let diagonal = g.diagonal();
        Scorer {
            graph,
            passes,
            weights,
            diagonal: if diagonal > 0.0 { diagonal } else { 1.0 },
            preferred_start: graph.preferred_start(g.tolerance()),
        }
    }

    fn geom(&self, p: &DirectedPass) -> &PassGeom {
        &self.passes[2 * p.segment_index + usize::from(p.reversed)]
    }

    fn start_prior(&self, first: &DirectedPass) -> f64 {
        let g = self.geom(first);
        let misses = usize::from(g.from != self.preferred_start)
            + usize::from(start_direction_penalized(g.start_tangent));
        self.weights.start_prior_cost * misses as f64
    }

    fn score(&self, traj: &Trajectory) -> ScoreBreakdown {
        let w = &self.weights;
        let mut b = ScoreBreakdown {
            pen_ups: traj.pen_strokes.len().saturating_sub(1),
            ..Default::default()
        };
        for stroke in &traj.pen_strokes {
            for pair in stroke.passes.windows(2) {
                b.turn_deg +=
                    angle_between_deg(self.geom(&pair[0]).end_tangent, self.geom(&pair[1]).start_tangent);
            }
            for p in stroke.passes.iter().filter(|p| p.retrace) {
                b.retraced_length += self.geom(p).length;
            }
        }
        b.pen_up = w.pen_up_cost * b.pen_ups as f64;
        b.turn = w.turn_cost_per_degree * b.turn_deg;
        b.retrace = w.retrace_cost_per_length * b.retraced_length / self.diagonal;
        if let Some(first) = traj.pen_strokes.first().and_then(|s| s.passes.first()) {
            b.start_prior = self.start_prior(first);
        }
        b
    }
}

/// Score any trajectory of `g` with the reconstruction cost model.
pub fn score_trajectory(g: &Glyph, traj: &Trajectory, weights: &CostWeights) -> Result<ScoreBreakdown> {
    traj.validate(g)?;
    let graph = build_segment_graph(g);
    Ok(Scorer::new(g, &graph, *weights).score(traj))
}

/// One search step: a first pass, optionally followed by its retrace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Step {
    segment: usize,
    reversed: bool,
    retrace: bool,
}

impl Step {
    fn pass(self) -> DirectedPass {
        DirectedPass {
            segment_index: self.segment,
            reversed: self.reversed,
            retrace: false,
        }
    }
}

struct Search<'a> {
    scorer: Scorer<'a>,
    n: usize,
}

#[derive(Clone)]
struct Partial {
    steps: Vec<Step>,
    used: Vec<bool>,
    cost: f64,
}

impl<'a> Search<'a> {
    fn entry(&self, s: Step) -> (usize, Point) {
        let g = self.scorer.geom(&s.pass());
        (g.from, g.start_tangent)
    }

    fn exit(&self, s: Step) -> (usize, Point) {
        let g = self.scorer.geom(&s.pass());
        if s.retrace {
            (g.from, -g.start_tangent)
        } else {
            (g.to, g.end_tangent)
        }
    }

    /// Cost of the step itself plus its transition from `prev`.
    /// `None` when the transition is not allowed.
    fn step_cost(&self, prev: Option<Step>, s: Step) -> Option<f64> {
        let w = &self.scorer.weights;
        let (node, tangent) = self.entry(s);
        let mut c = match prev {
            None => self.scorer.start_prior(&s.pass()),
            Some(p) => {
                let (pnode, ptangent) = self.exit(p);
                if pnode == node {
                    w.turn_cost_per_degree * angle_between_deg(ptangent, tangent)
                } else if p.retrace {
                    return None;
                } else {
                    w.pen_up_cost
                }
            }
        };
        if s.retrace {
            let len = self.scorer.geom(&s.pass()).length;
            c += w.turn_cost_per_degree * 180.0 + w.retrace_cost_per_length * len / self.scorer.diagonal;
        }
        Some(c)
    }

    /// Pen-ups that any completion must still pay.
    fn pen_up_bound(&self, used: &[bool], last: Option<Step>) -> f64 {
        let nodes = self.scorer.graph.nodes.len();
        let mut parent: Vec<usize> = (0..nodes).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut touched = vec![false; nodes];
        for (i, e) in self.scorer.graph.edges.iter().enumerate() {
            if used[i] {
                continue;
            }
            touched[e.from] = true;
            touched[e.to] = true;
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            parent[a] = b;
        }
        let mut roots: Vec<usize> = (0..nodes)
            .filter(|&v| touched[v])
            .map(|v| find(&mut parent, v))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.is_empty() {
            return 0.0;
        }
        let reachable = match last {
            None => true,
            Some(s) => {
                let v = self.exit(s).0;
                touched[v]
            }
        };
        let needed = roots.len() - usize::from(reachable);
        self.scorer.weights.pen_up_cost * needed as f64
    }

    fn moves(&self, p: &Partial) -> Vec<(Step, f64)> {
        let last = p.steps.last().copied();
        let mut out = Vec::new();
        for seg in 0..self.n {
            if p.used[seg] {
                continue;
            }
            for reversed in [false, true] {
                let last_step = p.steps.len() + 1 == self.n;
                for retrace in [false, true] {
                    if retrace && last_step {
                        continue;
                    }
                    let s = Step {
                        segment: seg,
                        reversed,
                        retrace,
                    };
                    if let Some(c) = self.step_cost(last, s) {
                        out.push((s, c));
                    }
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    fn trajectory(&self, glyph_id: &str, steps: &[Step]) -> Trajectory {
        let mut strokes: Vec<PenStroke> = Vec::new();
        let mut prev: Option<Step> = None;
        for &s in steps {
            let connected = prev.is_some_and(|p| self.exit(p).0 == self.entry(s).0);
            if !connected {
                strokes.push(PenStroke::new(Vec::new()));
            }
            let stroke = strokes.last_mut().expect("stroke pushed above");
            stroke.passes.push(s.pass());
            if s.retrace {
                stroke.passes.push(s.pass().retraced());
            }
            prev = Some(s);
        }
        Trajectory::new(glyph_id, strokes, Provenance::Reconstructed)
    }
}

struct Ranked {
    score: f64,
    pen_ups: usize,
    start: Point,
    passes: Vec<(usize, bool, bool)>,
}

fn rank_cmp(a: &Ranked, b: &Ranked) -> Ordering {
    let tol = 1e-9 * (1.0 + a.score.abs().max(b.score.abs()));
    let by_score = if (a.score - b.score).abs() <= tol {
        Ordering::Equal
    } else {
        a.score.total_cmp(&b.score)
    };
    by_score
        .then(a.pen_ups.cmp(&b.pen_ups))
        .then(b.start.y.total_cmp(&a.start.y))
        .then(a.start.x.total_cmp(&b.start.x))
        .then(a.passes.cmp(&b.passes))
}

fn ranked(g: &Glyph, c: &CandidateTrajectory) -> Ranked {
    Ranked {
        score: c.score,
        pen_ups: c.score_breakdown.pen_ups,
        start: c.trajectory.start(g),
        passes: c
            .trajectory
            .passes()
            .map(|p| (p.segment_index, p.reversed, p.retrace))
            .collect(),
    }
}

/// Ranked candidate trajectories, best first.
pub fn reconstruct(g: &Glyph, cfg: &ReconstructionConfig) -> Result<Vec<CandidateTrajectory>> {
    g.validate().into_result()?;
    cfg.validate()?;
    let graph = build_segment_graph(g);
    let search = Search {
        scorer: Scorer::new(g, &graph, cfg.weights),
        n: g.segments.len(),
    };
    let finals = if search.n <= cfg.exhaustive_segment_limit {
        exhaustive(&search, cfg.max_candidates)
    } else {
        beam(&search, cfg.beam_width)
    };
    if finals.is_empty() {
        return Err(Error::ReconstructionFailed(format!(
            "no complete traversal of glyph {} within beam limits",
            g.id
        )));
    }
    let mut out: Vec<(Ranked, CandidateTrajectory)> = finals
        .into_iter()
        .map(|steps| {
            let trajectory = search.trajectory(&g.id, &steps);
            let score_breakdown = search.scorer.score(&trajectory);
            let c = CandidateTrajectory {
                trajectory,
                score: score_breakdown.total(),
                score_breakdown,
            };
            (ranked(g, &c), c)
        })
        .collect();
    out.sort_by(|a, b| rank_cmp(&a.0, &b.0));
    out.truncate(cfg.max_candidates);
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

/// Branch and bound keeping every traversal that can still reach the top `k`.
fn exhaustive(search: &Search<'_>, k: usize) -> Vec<Vec<Step>> {
    struct State<'s, 'a> {
        search: &'s Search<'a>,
        k: usize,
        best: Vec<(f64, Vec<Step>)>,
    }
    impl State<'_, '_> {
        fn threshold(&self) -> f64 {
            if self.best.len() < self.k {
                f64::INFINITY
            } else {
                self.best[self.k - 1].0
            }
        }

        fn offer(&mut self, cost: f64, steps: &[Step]) {
            let pos = self.best.partition_point(|(c, _)| *c <= cost);
            self.best.insert(pos, (cost, steps.to_vec()));
            // keep ties with the k-th score so tie-breaking sees all of them
            let t = self.threshold();
            let tol = 1e-9 * (1.0 + t.abs());
            while self.best.len() > self.k && self.best[self.best.len() - 1].0 > t + tol {
                self.best.pop();
            }
        }

        fn dfs(&mut self, p: &mut Partial) {
            if p.steps.len() == self.search.n {
                self.offer(p.cost, &p.steps);
                return;
            }
            for (s, c) in self.search.moves(p) {
                let cost = p.cost + c;
                let t = self.threshold();
                if cost > t + 1e-9 * (1.0 + t.abs()) {
                    continue;
                }
                p.used[s.segment] = true;
                let bound = cost + self.search.pen_up_bound(&p.used, Some(s));
                if bound <= t + 1e-9 * (1.0 + t.abs()) {
                    p.steps.push(s);
                    let saved = p.cost;
                    p.cost = cost;
                    self.dfs(p);
                    p.cost = saved;
                    p.steps.pop();
                }
                p.used[s.segment] = false;
            }
        }
    }
    let mut state = State {
        search,
        k,
        best: Vec::new(),
    };
    let mut root = Partial {
        steps: Vec::new(),
        used: vec![false; search.n],
        cost: 0.0,
    };
    state.dfs(&mut root);
    state.best.into_iter().map(|(_, s)| s).collect()
}

fn beam(search: &Search<'_>, width: usize) -> Vec<Vec<Step>> {
    let mut frontier = vec![Partial {
        steps: Vec::new(),
        used: vec![false; search.n],
        cost: 0.0,
    }];
    for _ in 0..search.n {
        let mut next: Vec<(f64, Partial)> = Vec::new();
        for p in &frontier {
            for (s, c) in search.moves(p) {
                let mut q = p.clone();
                q.steps.push(s);
                q.used[s.segment] = true;
                q.cost += c;
                let key = q.cost + search.pen_up_bound(&q.used, Some(s));
                next.push((key, q));
            }
        }
        next.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.steps.cmp(&b.1.steps)));
        next.truncate(width);
        frontier = next.into_iter().map(|(_, p)| p).collect();
        if frontier.is_empty() {
            break;
        }
    }
    frontier
        .into_iter()
        .filter(|p| p.steps.len() == search.n)
        .map(|p| p.steps)
        .collect()
}

/// Pick one ranked candidate and re-check coverage.
pub fn select_trajectory(g: &Glyph, candidates: &[CandidateTrajectory], choice: usize) -> Result<Trajectory> {
    let c = candidates.get(choice).ok_or_else(|| {
        Error::invalid(format!(
            "candidate {choice} out of range ({} available)",
            candidates.len()
        ))
    })?;
    c.trajectory.validate(g)?;
    let mut t = c.trajectory.clone();
    t.provenance = Provenance::Reconstructed;
    Ok(t)
}
