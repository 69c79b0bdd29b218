//! Script-level aggregation, distributions, the bigram stroke model,
//! self-similarity matrices and plot-ready exports.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::glyph::{DirectionCode, Glyph, Trajectory};
use crate::geometry::Point;
use crate::metrics::{shape_signature, signature_distance, DistinctivityMode, MetricRecord};
use crate::segment::SegmentationResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    Uniform,
    Frequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "bins")]
pub enum Binning {
    #[default]
    FreedmanDiaconis,
    Fixed(usize),
}

pub const MIN_FD_BINS: usize = 5;
pub const MAX_FD_BINS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` ascending bin edges; the last bin is closed.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Histogram of finite values; `None` when there are none.
pub fn histogram(values: &[f64], binning: Binning) -> Option<Histogram> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let (lo, hi) = (v[0], v[v.len() - 1]);
    let bins = match binning {
        Binning::Fixed(n) => n.max(1),
        Binning::FreedmanDiaconis => {
            let iqr = quantile(&v, 0.75) - quantile(&v, 0.25);
            let width = 2.0 * iqr / (v.len() as f64).cbrt();
            if width > 0.0 && hi > lo {
                (((hi - lo) / width).ceil() as usize).clamp(MIN_FD_BINS, MAX_FD_BINS)
            } else {
                MIN_FD_BINS
            }
        }
    };
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + width * i as f64 })
        .collect();
    let mut counts = vec![0; bins];
    for x in v {
        let i = (((x - lo) / width).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    Some(Histogram { edges, counts })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScriptMetrics {
    pub script_id: String,
    pub per_glyph: BTreeMap<String, MetricRecord>,
    /// Unweighted means over defined values.
    pub means: BTreeMap<String, Option<f64>>,
    /// Usage-frequency weighted means, when requested.
    pub weighted_means: Option<BTreeMap<String, Option<f64>>>,
    pub histograms: BTreeMap<String, Histogram>,
}

fn weighted_means(records: &[(&MetricRecord, f64)]) -> BTreeMap<String, Option<f64>> {
    MetricRecord::scalar_names()
        .into_iter()
        .map(|name| {
            let (mut num, mut den) = (0.0, 0.0);
            for (r, w) in records {
                if let Some(v) = r.scalar(name) {
                    num += w * v;
                    den += w;
                }
            }
            let mean = (den > 0.0).then(|| num / den);
            (name.to_string(), mean)
        })
        .collect()
}

pub fn aggregate(
    script_id: &str,
    glyphs: &[Glyph],
    records: &[MetricRecord],
    weighting: Weighting,
    binning: Binning,
) -> Result<ScriptMetrics> {
    if glyphs.is_empty() || records.is_empty() {
        return Err(Error::invalid("cannot aggregate an empty corpus"));
    }
    let mut per_glyph = BTreeMap::new();
    let mut uniform = Vec::new();
    let mut weighted = Vec::new();
    for r in records {
        let g = glyphs
            .iter()
            .find(|g| g.id == r.glyph_id)
            .ok_or_else(|| Error::invalid(format!("record for unknown glyph {:?}", r.glyph_id)))?;
        if per_glyph.insert(r.glyph_id.clone(), r.clone()).is_some() {
            return Err(Error::invalid(format!("two records for glyph {:?}", r.glyph_id)));
        }
        uniform.push((r, 1.0));
        weighted.push((r, g.weight()));
    }
    let histograms = MetricRecord::scalar_names()
        .into_iter()
        .filter_map(|name| {
            let values: Vec<f64> = records.iter().filter_map(|r| r.scalar(name)).collect();
            histogram(&values, binning).map(|h| (name.to_string(), h))
        })
        .collect();
    Ok(ScriptMetrics {
        script_id: script_id.to_string(),
        per_glyph,
        means: weighted_means(&uniform),
        weighted_means: (weighting == Weighting::Frequency).then(|| weighted_means(&weighted)),
        histograms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothing {
    #[default]
    None,
    AddOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BigramModel {
    pub unigram: BTreeMap<DirectionCode, f64>,
    /// Conditional next-code distributions `p(b | a)`, one row per `a`.
    pub bigram: BTreeMap<DirectionCode, BTreeMap<DirectionCode, f64>>,
    pub smoothing: Smoothing,
    pub unigram_entropy_nats: f64,
    pub conditional_entropy_nats: f64,
}

impl BigramModel {
    pub fn conditional(&self, a: DirectionCode, b: DirectionCode) -> f64 {
        self.bigram
            .get(&a)
            .and_then(|row| row.get(&b))
            .copied()
            .unwrap_or(0.0)
    }
}

fn entropy_of(dist: impl Iterator<Item = f64>) -> f64 {
    -dist.filter(|&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

/// Unigram and bigram statistics over per-glyph code sequences; pairs never
/// span two glyphs.
pub fn build_bigram_model(sequences: &[Vec<DirectionCode>], smoothing: Smoothing) -> Result<BigramModel> {
    let total: usize = sequences.iter().map(Vec::len).sum();
    if total == 0 {
        return Err(Error::invalid("bigram model needs at least one stroke"));
    }
    let mut uni = [0usize; 8];
    let mut bi = [[0usize; 8]; 8];
    for seq in sequences {
        for c in seq {
            uni[c.ccw_index()] += 1;
        }
        for w in seq.windows(2) {
            bi[w[0].ccw_index()][w[1].ccw_index()] += 1;
        }
    }
    let add = usize::from(smoothing == Smoothing::AddOne);
    let uni_total: usize = uni.iter().map(|c| c + add).sum();
    let unigram: BTreeMap<DirectionCode, f64> = DirectionCode::CCW
        .into_iter()
        .filter(|c| uni[c.ccw_index()] + add > 0)
        .map(|c| (c, (uni[c.ccw_index()] + add) as f64 / uni_total as f64))
        .collect();

    let mut bigram = BTreeMap::new();
    let mut row_weight = BTreeMap::new();
    for a in DirectionCode::CCW {
        let row = &bi[a.ccw_index()];
        let row_total: usize = row.iter().map(|c| c + add).sum();
        if row_total == 0 {
            continue;
        }
        let dist: BTreeMap<DirectionCode, f64> = DirectionCode::CCW
            .into_iter()
            .filter(|b| row[b.ccw_index()] + add > 0)
            .map(|b| (b, (row[b.ccw_index()] + add) as f64 / row_total as f64))
            .collect();
        bigram.insert(a, dist);
        row_weight.insert(a, row_total as f64);
    }
    let weight_total: f64 = row_weight.values().sum();
    let conditional_entropy_nats = bigram
        .iter()
        .map(|(a, row)| row_weight[a] / weight_total * entropy_of(row.values().copied()))
        .sum();
    Ok(BigramModel {
        unigram_entropy_nats: entropy_of(unigram.values().copied()),
        unigram,
        bigram,
        smoothing,
        conditional_entropy_nats,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub glyph_ids: Vec<String>,
    /// `None` in rows and columns of glyphs that could not be compared.
    pub values: Vec<Vec<Option<f64>>>,
    pub flagged: BTreeMap<String, String>,
}

/// Pairwise distinctivity over a script. Glyphs without a trajectory are
/// compared in storage order.
pub fn similarity_matrix(
    items: &[(&Glyph, Option<&Trajectory>)],
    mode: DistinctivityMode,
    resample: usize,
) -> Result<SimilarityMatrix> {
    if items.len() < 2 {
        return Err(Error::invalid("similarity matrix needs at least 2 glyphs"));
    }
    if resample < 8 {
        return Err(Error::invalid("resample must be >= 8"));
    }
    let n = items.len();
    let mut flagged = BTreeMap::new();
    let signatures: Vec<Option<Vec<Point>>> = items
        .par_iter()
        .map(|(g, t)| shape_signature(g, *t, mode, resample))
        .collect::<Vec<_>>()
        .into_iter()
        .zip(items)
        .map(|(r, (g, _))| {
            r.map_err(|e| flagged.insert(g.id.clone(), e.to_string())).ok()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| signatures[i].is_some() && signatures[j].is_some())
        .collect();
    let cells: Vec<((usize, usize), Result<f64>)> = pairs
        .into_par_iter()
        .map(|(i, j)| {
            let (a, b) = (signatures[i].as_ref(), signatures[j].as_ref());
            ((i, j), signature_distance(a.expect("paired"), b.expect("paired")))
        })
        .collect();
    let ok: Vec<bool> = signatures.iter().map(Option::is_some).collect();
    let mut values = vec![vec![None; n]; n];
    for i in 0..n {
        if ok[i] {
            values[i][i] = Some(0.0);
        }
    }
    for ((i, j), r) in cells {
        let v = r?;
        values[i][j] = Some(v);
        values[j][i] = Some(v);
    }
    Ok(SimilarityMatrix {
        glyph_ids: items.iter().map(|(g, _)| g.id.clone()).collect(),
        values,
        flagged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Script,
    Glyph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelRow {
    pub label: String,
    pub script_id: String,
    pub kind: RowKind,
    pub raw: Vec<Option<f64>>,
    pub normalized: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelCoordinates {
    pub fields: Vec<String>,
    /// `(min, max)` per field across all rows.
    pub bounds: Vec<(f64, f64)>,
    pub rows: Vec<ParallelRow>,
    pub warnings: Vec<String>,
}

type Values = BTreeMap<String, Option<f64>>;

/// Min-max normalized table with one row per script mean and, optionally,
/// one per glyph. A field whose range is zero normalizes to 0.5.
pub fn export_parallel_coordinates(
    scripts: &[ScriptMetrics],
    fields: &[&str],
    include_glyphs: bool,
) -> Result<ParallelCoordinates> {
    if scripts.is_empty() {
        return Err(Error::invalid("parallel coordinates need at least one script"));
    }
    if fields.is_empty() {
        return Err(Error::invalid("parallel coordinates need at least one field"));
    }
    let known = MetricRecord::scalar_names();
    let mut rows: Vec<(String, String, RowKind, Values)> = Vec::new();
    for s in scripts {
        rows.push((s.script_id.clone(), s.script_id.clone(), RowKind::Script, s.means.clone()));
        if include_glyphs {
            for (id, r) in &s.per_glyph {
                let vals = r.scalars().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
                rows.push((id.clone(), s.script_id.clone(), RowKind::Glyph, vals));
            }
        }
    }
    let mut warnings = Vec::new();
    let mut kept = Vec::new();
    let mut bounds = Vec::new();
    for &f in fields {
        if !known.contains(&f) {
            warnings.push(format!("unknown field {f:?} dropped"));
            continue;
        }
        let vals: Vec<f64> = rows.iter().filter_map(|r| r.3.get(f).copied().flatten()).collect();
        if vals.is_empty() {
            warnings.push(format!("field {f:?} has no values and was dropped"));
            continue;
        }
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        kept.push(f.to_string());
        bounds.push((lo, hi));
    }
    let rows = rows
        .into_iter()
        .map(|(label, script_id, kind, vals)| {
            let raw: Vec<Option<f64>> = kept.iter().map(|f| vals.get(f).copied().flatten()).collect();
            let normalized = raw
                .iter()
                .zip(&bounds)
                .map(|(v, &(lo, hi))| v.map(|x| if hi > lo { (x - lo) / (hi - lo) } else { 0.5 }))
                .collect();
            ParallelRow {
                label,
                script_id,
                kind,
                raw,
                normalized,
            }
        })
        .collect();
    Ok(ParallelCoordinates {
        fields: kept,
        bounds,
        rows,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeDistribution {
    /// Counts in reporting order N, NE, E, SE, S, SW, W, NW.
    pub counts: Vec<(DirectionCode, usize)>,
    pub modal: Option<DirectionCode>,
}

impl CodeDistribution {
    fn from_codes(codes: &[DirectionCode]) -> Self {
        let counts: Vec<(DirectionCode, usize)> = DirectionCode::REPORT_ORDER
            .into_iter()
            .map(|c| (c, codes.iter().filter(|&&x| x == c).count()))
            .collect();
        let mut modal: Option<(DirectionCode, usize)> = None;
        for &(c, k) in &counts {
            if k > 0 && modal.is_none_or(|(_, best)| k > best) {
                modal = Some((c, k));
            }
        }
        CodeDistribution {
            counts,
            modal: modal.map(|(c, _)| c),
        }
    }

    pub fn count(&self, code: DirectionCode) -> usize {
        self.counts
            .iter()
            .find(|(c, _)| *c == code)
            .map(|(_, k)| *k)
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSummary {
    pub major: CodeDistribution,
    pub initial: CodeDistribution,
    pub warnings: Vec<String>,
}

/// Distributions of per-glyph major and initial stroke directions.
pub fn direction_summary(items: &[(&str, &SegmentationResult)]) -> DirectionSummary {
    let mut major = Vec::new();
    let mut initial = Vec::new();
    let mut warnings = Vec::new();
    for (id, seg) in items {
        let vis: Vec<_> = seg.visible().collect();
        let Some(first) = vis.first() else {
            warnings.push(format!("glyph {id:?} has no visible strokes and was skipped"));
            continue;
        };
        let longest = crate::metrics::major_stroke(seg).unwrap_or(first);
        major.push(DirectionCode::from_angle(longest.net_angle));
        initial.push(DirectionCode::from_angle(first.net_angle));
    }
    DirectionSummary {
        major: CodeDistribution::from_codes(&major),
        initial: CodeDistribution::from_codes(&initial),
        warnings,
    }
}
