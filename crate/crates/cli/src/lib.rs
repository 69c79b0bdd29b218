//! The `glyphometrics` command line.
//!
//! Exit codes: 0 on success, 1 on a domain or I/O error (including per-glyph
//! failures), 2 on a usage error.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use glyphometrics::io::{
    csv_bytes, format_sig6, histograms_csv, load_corpus, parallel_coordinates_csv, records_csv, save_corpus,
    script_means_csv, similarity_csv, to_canonical_json, write_atomic, CorpusDocument,
};
use glyphometrics::metrics::{DistinctivityMode, MetricOptions, MetricRecord, DEFAULT_RESAMPLE};
use glyphometrics::pipeline::{analyze_corpus, GlyphAnalysis};
use glyphometrics::reconstruct::{reconstruct, select_trajectory, CostWeights, ReconstructionConfig};
use glyphometrics::script::{
    aggregate, build_bigram_model, direction_summary, export_parallel_coordinates, similarity_matrix, Binning,
    CodeDistribution, DirectionSummary, ParallelCoordinates, RowKind, ScriptMetrics, Smoothing, Weighting,
};
use glyphometrics::segment::SegmentationConfig;
use glyphometrics::{fixtures, NormalizeMode, Point, Provenance};

pub const THREADS_ENV: &str = "GLYPHOMETRICS_THREADS";

/// A bad flag or environment value, detected before any file is touched.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Some glyphs could not be processed; the rest were written.
#[derive(Debug)]
pub struct GlyphFailures(pub Vec<(String, String)>);

impl fmt::Display for GlyphFailures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} glyph(s) failed", self.0.len())
    }
}

impl std::error::Error for GlyphFailures {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        2
    } else {
        1
    }
}

#[derive(Debug, Parser)]
#[command(name = "glyphometrics", version, about = "Trajectory recovery, stroke segmentation and metrics for handwritten glyphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Trajectory,
    Static,
}

impl From<ModeArg> for DistinctivityMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Trajectory => DistinctivityMode::Trajectory,
            ModeArg::Static => DistinctivityMode::Static,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Uniform,
    Frequency,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a corpus file: version, references and trajectory coverage.
    Validate { corpus: PathBuf },
    /// Rank candidate trajectories for every glyph and store them.
    Reconstruct {
        corpus: PathBuf,
        /// Number of candidates kept per glyph.
        #[arg(long, default_value_t = 5, value_parser = positive)]
        top: usize,
        /// Cost weights, e.g. `pen_up=10,turn=0.02,retrace=5,start=1`.
        #[arg(long, value_parser = parse_weights)]
        weights: Option<CostWeights>,
        /// Write here instead of updating the corpus in place.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also replace recorded and manual trajectories.
        #[arg(long)]
        force: bool,
    },
    /// Store segmentation settings and check every glyph segments cleanly.
    Segment {
        corpus: PathBuf,
        #[arg(long, value_parser = sharp_degrees)]
        sharp_deg: Option<f64>,
        /// Curvature peak prominence as a fraction of the glyph maximum.
        #[arg(long, value_parser = fraction)]
        prominence: Option<f64>,
        /// Also write the segmentations as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-glyph metric table.
    Metrics {
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Scale each glyph to a unit bounding-box diagonal first.
        #[arg(long)]
        normalize: bool,
        /// Also write the full records as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Pairwise distinctivity matrix.
    Compare {
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Trajectory)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_RESAMPLE, value_parser = resample_count)]
        resample: usize,
    },
    /// Script-level tables for one or more corpora.
    ScriptStats {
        #[arg(required = true)]
        corpora: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = WeightingArg::Uniform)]
        weighting: WeightingArg,
        /// Fixed histogram bin count instead of Freedman-Diaconis.
        #[arg(long, value_parser = positive)]
        bins: Option<usize>,
        /// Comma-separated metric names for the parallel-coordinates table.
        #[arg(long, value_parser = parse_fields)]
        fields: Option<Fields>,
        /// Add one parallel-coordinates row per glyph.
        #[arg(long)]
        include_glyphs: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Trajectory)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_RESAMPLE, value_parser = resample_count)]
        resample: usize,
    },
    /// Write three synthetic script stages.
    Synth {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 50, value_parser = positive)]
        glyphs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Re-save a corpus in canonical form, optionally from screen coordinates.
    Import {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Source y grows downward.
        #[arg(long)]
        flip_y: bool,
    },
}

#[derive(Debug, Clone)]
pub struct Fields(pub Vec<String>);

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn resample_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 8 => Ok(n),
        _ => Err(format!("resample must be an integer >= 8, got {s:?}")),
    }
}

fn sharp_degrees(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(d) if d > 0.0 && d < 180.0 => Ok(d),
        _ => Err(format!("expected degrees in (0, 180), got {s:?}")),
    }
}

fn fraction(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(p) if (0.0..1.0).contains(&p) => Ok(p),
        _ => Err(format!("expected a fraction in [0, 1), got {s:?}")),
    }
}

pub fn parse_weights(s: &str) -> Result<CostWeights, String> {
    let mut w = CostWeights::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| format!("weight {k:?} is not a number: {v:?}"))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(format!("weight {k:?} must be finite and non-negative"));
        }
        match k.trim() {
            "pen_up" => w.pen_up_cost = v,
            "turn" => w.turn_cost_per_degree = v,
            "retrace" => w.retrace_cost_per_length = v,
            "start" => w.start_prior_cost = v,
            other => return Err(format!("unknown weight {other:?} (pen_up, turn, retrace, start)")),
        }
    }
    Ok(w)
}

fn parse_fields(s: &str) -> Result<Fields, String> {
    let known = MetricRecord::scalar_names();
    let fields: Vec<String> = s
        .split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(String::from)
        .collect();
    if fields.is_empty() {
        return Err("no fields given".into());
    }
    if let Some(bad) = fields.iter().find(|f| !known.contains(&f.as_str())) {
        return Err(format!("unknown metric {bad:?}"));
    }
    Ok(Fields(fields))
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n >= 1 => n,
        _ => return Err(UsageError(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")).into()),
    };
    // a second call in the same process (tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Validate { corpus } => validate(&corpus),
        Command::Reconstruct {
            corpus,
            top,
            weights,
            out,
            force,
        } => {
            let cfg = ReconstructionConfig {
                weights: weights.unwrap_or_default(),
                max_candidates: top,
                ..ReconstructionConfig::default()
            };
            reconstruct_cmd(&corpus, &cfg, out.as_deref(), force)
        }
        Command::Segment {
            corpus,
            sharp_deg,
            prominence,
            json,
            out,
        } => segment_cmd(&corpus, sharp_deg, prominence, json.as_deref(), out.as_deref()),
        Command::Metrics {
            corpus,
            out,
            normalize,
            json,
        } => metrics_cmd(&corpus, &out, normalize, json.as_deref()),
        Command::Compare {
            corpus,
            out,
            mode,
            resample,
        } => compare_cmd(&corpus, &out, mode.into(), resample),
        Command::ScriptStats {
            corpora,
            out_dir,
            weighting,
            bins,
            fields,
            include_glyphs,
            mode,
            resample,
        } => {
            let opts = StatsOptions {
                weighting: match weighting {
                    WeightingArg::Uniform => Weighting::Uniform,
                    WeightingArg::Frequency => Weighting::Frequency,
                },
                binning: bins.map(Binning::Fixed).unwrap_or_default(),
                fields: fields
                    .map(|f| f.0)
                    .unwrap_or_else(|| MetricRecord::scalar_names().into_iter().map(String::from).collect()),
                include_glyphs,
                mode: mode.into(),
                resample,
            };
            script_stats(&corpora, &out_dir, &opts)
        }
        Command::Synth { out_dir, glyphs, seed } => synth(&out_dir, glyphs, seed),
        Command::Import { input, out, flip_y } => import(&input, &out, flip_y),
    }
}

fn load(path: &Path) -> Result<CorpusDocument> {
    load_corpus(path).with_context(|| format!("loading {}", path.display()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    write_atomic(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn save(doc: &CorpusDocument, path: &Path) -> Result<()> {
    save_corpus(doc, path).with_context(|| format!("writing {}", path.display()))
}

fn report(failures: &[(String, String)]) -> Result<()> {
    if failures.is_empty() {
        return Ok(());
    }
    for (id, e) in failures {
        eprintln!("glyph {id}: {e}");
    }
    Err(GlyphFailures(failures.to_vec()).into())
}

fn validate(path: &Path) -> Result<()> {
    let doc = load(path)?;
    let with_traj = doc.trajectories.len();
    println!(
        "{}: {} glyphs, {} with trajectories, format {}",
        path.display(),
        doc.corpus.glyphs.len(),
        with_traj,
        doc.format_version
    );
    Ok(())
}

fn reconstruct_cmd(path: &Path, cfg: &ReconstructionConfig, out: Option<&Path>, force: bool) -> Result<()> {
    let mut doc = load(path)?;
    let results: Vec<_> = doc
        .corpus
        .glyphs
        .par_iter()
        .map(|g| (g.id.clone(), reconstruct(g, cfg).and_then(|c| Ok((select_trajectory(g, &c, 0)?, c)))))
        .collect();
    let mut failures = Vec::new();
    let (mut replaced, mut kept) = (0, 0);
    for (id, r) in results {
        match r {
            Ok((best, cands)) => {
                doc.candidates.insert(id.clone(), cands);
                let replace = force
                    || doc
                        .trajectories
                        .get(&id)
                        .is_none_or(|t| t.provenance == Provenance::Reconstructed);
                if replace {
                    doc.trajectories.insert(id, best);
                    replaced += 1;
                } else {
                    kept += 1;
                }
            }
            Err(e) => failures.push((id, e.to_string())),
        }
    }
    save(&doc, out.unwrap_or(path))?;
    println!("reconstructed {replaced} glyph(s), kept {kept} recorded trajectory(ies)");
    report(&failures)
}

fn segment_cmd(
    path: &Path,
    sharp_deg: Option<f64>,
    prominence: Option<f64>,
    json: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let mut doc = load(path)?;
    let mut cfg: SegmentationConfig = doc.segmentation_config();
    if let Some(d) = sharp_deg {
        cfg.sharp_junction_threshold_deg = d;
    }
    if let Some(p) = prominence {
        cfg.curvature_prominence = p;
    }
    doc.segmentation_config = Some(cfg);
    let (ok, failures) = split(analyze_corpus(&doc, &MetricOptions::default()));
    save(&doc, out.unwrap_or(path))?;
    if let Some(json) = json {
        let map: BTreeMap<&str, _> = ok.iter().map(|a| (a.glyph.id.as_str(), &a.segmentation)).collect();
        write(json, to_canonical_json(&map)?.as_bytes())?;
    }
    println!("segmented {} glyph(s)", ok.len());
    report(&failures)
}

fn split(all: Vec<(String, glyphometrics::Result<GlyphAnalysis>)>) -> (Vec<GlyphAnalysis>, Vec<(String, String)>) {
    let mut ok = Vec::new();
    let mut failures = Vec::new();
    for (id, r) in all {
        match r {
            Ok(a) => ok.push(a),
            Err(e) => failures.push((id, e.to_string())),
        }
    }
    (ok, failures)
}

fn metrics_cmd(path: &Path, out: &Path, normalize: bool, json: Option<&Path>) -> Result<()> {
    let doc = load(path)?;
    let opts = MetricOptions {
        normalize: if normalize {
            NormalizeMode::UnitDiagonal
        } else {
            NormalizeMode::None
        },
        ..MetricOptions::default()
    };
    let (ok, failures) = split(analyze_corpus(&doc, &opts));
    let records: Vec<MetricRecord> = ok.into_iter().map(|a| a.metrics).collect();
    if !records.is_empty() {
        write(out, &records_csv(&records)?)?;
        if let Some(json) = json {
            write(json, to_canonical_json(&records)?.as_bytes())?;
        }
    }
    report(&failures)
}

fn compare_cmd(path: &Path, out: &Path, mode: DistinctivityMode, resample: usize) -> Result<()> {
    let doc = load(path)?;
    let matrix = similarity(&doc, mode, resample)?;
    write(out, &similarity_csv(&matrix)?)?;
    let failures: Vec<_> = matrix.flagged.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    report(&failures)
}

fn similarity(
    doc: &CorpusDocument,
    mode: DistinctivityMode,
    resample: usize,
) -> Result<glyphometrics::script::SimilarityMatrix> {
    let glyphs: Vec<_> = doc.corpus.glyphs.iter().map(|g| doc.corpus.resolved_glyph(g)).collect();
    let items: Vec<_> = glyphs.iter().map(|g| (g, doc.trajectories.get(&g.id))).collect();
    Ok(similarity_matrix(&items, mode, resample)?)
}

pub struct StatsOptions {
    pub weighting: Weighting,
    pub binning: Binning,
    pub fields: Vec<String>,
    pub include_glyphs: bool,
    pub mode: DistinctivityMode,
    pub resample: usize,
}

struct ScriptOutput {
    metrics: ScriptMetrics,
    analyses: Vec<GlyphAnalysis>,
    directions: DirectionSummary,
    bigram: glyphometrics::script::BigramModel,
}

fn script_stats(paths: &[PathBuf], out_dir: &Path, opts: &StatsOptions) -> Result<()> {
    let docs = paths.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for d in &docs {
        if !seen.insert(d.corpus.id.clone()) {
            return Err(anyhow!("script id {:?} appears in more than one corpus", d.corpus.id));
        }
    }

    let mut failures = Vec::new();
    let mut outputs = Vec::new();
    for doc in &docs {
        let (analyses, failed) = split(analyze_corpus(doc, &MetricOptions::default()));
        failures.extend(failed.into_iter().map(|(id, e)| (format!("{}/{id}", doc.corpus.id), e)));
        if analyses.is_empty() {
            return Err(anyhow!("script {:?} has no analysable glyphs", doc.corpus.id));
        }
        let sid = doc.corpus.id.as_str();
        let glyphs: Vec<_> = analyses.iter().map(|a| a.glyph.clone()).collect();
        let records: Vec<_> = analyses.iter().map(|a| a.metrics.clone()).collect();
        let metrics = aggregate(sid, &glyphs, &records, opts.weighting, opts.binning)?;
        let segs: Vec<_> = analyses
            .iter()
            .map(|a| (a.glyph.id.as_str(), &a.segmentation))
            .collect();
        let directions = direction_summary(&segs);
        let sequences: Vec<_> = analyses
            .iter()
            .map(|a| a.segmentation.stroke_inventory_key.clone())
            .collect();
        let bigram = build_bigram_model(&sequences, Smoothing::None)?;

        let dir = out_dir.join(sid);
        write(&dir.join("metrics.csv"), &records_csv(&records)?)?;
        write(&dir.join("means.csv"), &script_means_csv(&metrics)?)?;
        write(&dir.join("script_metrics.json"), to_canonical_json(&metrics)?.as_bytes())?;
        write(&dir.join("histograms.csv"), &histograms_csv(&metrics.histograms)?)?;
        let entropy_hist: BTreeMap<String, _> = metrics
            .histograms
            .iter()
            .filter(|(k, _)| k.as_str() == "entropy_nats")
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        write(&dir.join("entropy_histogram.csv"), &histograms_csv(&entropy_hist)?)?;
        if doc.corpus.glyphs.len() >= 2 {
            let matrix = similarity(doc, opts.mode, opts.resample)?;
            write(&dir.join("similarity.csv"), &similarity_csv(&matrix)?)?;
            failures.extend(
                matrix
                    .flagged
                    .iter()
                    .map(|(id, e)| (format!("{sid}/{id}"), format!("similarity: {e}"))),
            );
        }
        write(&dir.join("direction_summary.json"), to_canonical_json(&directions)?.as_bytes())?;
        write(&dir.join("bigram.json"), to_canonical_json(&bigram)?.as_bytes())?;
        outputs.push(ScriptOutput {
            metrics,
            analyses,
            directions,
            bigram,
        });
    }

    let scripts: Vec<ScriptMetrics> = outputs.iter().map(|o| o.metrics.clone()).collect();
    let fields: Vec<&str> = opts.fields.iter().map(String::as_str).collect();
    let pc = export_parallel_coordinates(&scripts, &fields, false)?;
    write(&out_dir.join("parallel_coordinates.csv"), &parallel_coordinates_csv(&pc)?)?;
    write(&out_dir.join("parallel_coordinates.json"), to_canonical_json(&pc)?.as_bytes())?;
    if opts.include_glyphs {
        let pcg = export_parallel_coordinates(&scripts, &fields, true)?;
        write(&out_dir.join("parallel_coordinates_glyphs.csv"), &glyph_rows_csv(&pcg)?)?;
    }
    write(&out_dir.join("stroke_counts.csv"), &stroke_counts_csv(&outputs)?)?;
    write(&out_dir.join("entropy.csv"), &entropy_csv(&outputs)?)?;
    write(&out_dir.join("direction_summary.csv"), &directions_csv(&outputs)?)?;
    println!("wrote script statistics for {} script(s) to {}", outputs.len(), out_dir.display());
    report(&failures)
}

fn glyph_rows_csv(pc: &ParallelCoordinates) -> Result<Vec<u8>> {
    let glyphs_only = ParallelCoordinates {
        rows: pc.rows.iter().filter(|r| r.kind == RowKind::Glyph).cloned().collect(),
        ..pc.clone()
    };
    Ok(parallel_coordinates_csv(&glyphs_only)?)
}

fn stroke_counts_csv(outputs: &[ScriptOutput]) -> Result<Vec<u8>> {
    let header: Vec<String> = [
        "script_id",
        "glyph_id",
        "primitive",
        "pen_strokes",
        "disjointed",
        "retraces",
        "upstrokes",
        "downstrokes",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    for o in outputs {
        for a in &o.analyses {
            let c = &a.metrics.counts;
            let mut row = vec![o.metrics.script_id.clone(), a.glyph.id.clone()];
            row.extend(
                [c.primitive, c.pen_strokes, c.disjointed, c.retraces, c.upstrokes, c.downstrokes].map(|n| n.to_string()),
            );
            rows.push(row);
        }
    }
    Ok(csv_bytes(&header, &rows)?)
}

fn entropy_csv(outputs: &[ScriptOutput]) -> Result<Vec<u8>> {
    let header: Vec<String> = [
        "script_id",
        "conditional_entropy_nats",
        "mean_glyph_entropy_nats",
        "unigram_entropy_nats",
    ]
    .map(String::from)
    .to_vec();
    let rows = outputs
        .iter()
        .map(|o| {
            let mean = o.metrics.means.get("entropy_nats").copied().flatten();
            vec![
                o.metrics.script_id.clone(),
                format_sig6(o.bigram.conditional_entropy_nats),
                mean.map(format_sig6).unwrap_or_default(),
                format_sig6(o.bigram.unigram_entropy_nats),
            ]
        })
        .collect::<Vec<_>>();
    Ok(csv_bytes(&header, &rows)?)
}

fn directions_csv(outputs: &[ScriptOutput]) -> Result<Vec<u8>> {
    let header: Vec<String> = ["script_id", "distribution", "code", "count", "modal"]
        .map(String::from)
        .to_vec();
    let mut rows = Vec::new();
    for o in outputs {
        let dists: [(&str, &CodeDistribution); 2] = [("major", &o.directions.major), ("initial", &o.directions.initial)];
        for (name, d) in dists {
            for (code, n) in &d.counts {
                rows.push(vec![
                    o.metrics.script_id.clone(),
                    name.to_string(),
                    code.as_str().to_string(),
                    n.to_string(),
                    (d.modal == Some(*code)).to_string(),
                ]);
            }
        }
    }
    Ok(csv_bytes(&header, &rows)?)
}

fn synth(out_dir: &Path, glyphs: usize, seed: u64) -> Result<()> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    for doc in fixtures::synthetic_stages(glyphs, seed) {
        let path = out_dir.join(format!("{}.json", doc.corpus.id));
        save(&doc, &path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn import(input: &Path, out: &Path, flip_y: bool) -> Result<()> {
    let mut doc = load(input)?;
    if flip_y {
        let flip = |p: Point| Point::new(p.x, -p.y);
        for g in &mut doc.corpus.glyphs {
            *g = g.transformed(flip);
        }
        doc.corpus.baseline_y = doc.corpus.baseline_y.map(|y| -y);
        for lms in doc.manual_landmarks.values_mut() {
            for l in lms {
                l.location = flip(l.location);
            }
        }
        for pts in doc.suppressed_landmarks.values_mut() {
            for p in pts {
                *p = flip(*p);
            }
        }
    }
    save(&doc, out)
}
