//! Corpus documents and CSV/JSON exports.
//!
//! Documents are stored in a canonical JSON form: object keys sorted, floats
//! rounded to 1e-9, two-space indentation and a trailing newline.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::glyph::{Glyph, LandmarkPoint, ScriptCorpus, Trajectory};
use crate::metrics::MetricRecord;
use crate::reconstruct::CandidateTrajectory;
use crate::script::{Histogram, ParallelCoordinates, RowKind, ScriptMetrics, SimilarityMatrix};
use crate::segment::{effective_landmarks, SegmentationConfig};

pub const FORMAT_VERSION: &str = "1.0";

/// A corpus plus everything recorded about it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusDocument {
    pub format_version: String,
    pub corpus: ScriptCorpus,
    #[serde(default)]
    pub trajectories: BTreeMap<String, Trajectory>,
    /// Ranked reconstruction candidates kept for later human choice.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub candidates: BTreeMap<String, Vec<CandidateTrajectory>>,
    #[serde(default)]
    pub manual_landmarks: BTreeMap<String, Vec<LandmarkPoint>>,
    /// Locations of automatic landmarks removed by hand.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub suppressed_landmarks: BTreeMap<String, Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segmentation_config: Option<SegmentationConfig>,
}

impl CorpusDocument {
    pub fn new(corpus: ScriptCorpus) -> Self {
        CorpusDocument {
            format_version: FORMAT_VERSION.to_string(),
            corpus,
            trajectories: BTreeMap::new(),
            candidates: BTreeMap::new(),
            manual_landmarks: BTreeMap::new(),
            suppressed_landmarks: BTreeMap::new(),
            segmentation_config: None,
        }
    }

    pub fn glyph(&self, id: &str) -> Option<&Glyph> {
        self.corpus.glyph(id)
    }

    pub fn segmentation_config(&self) -> SegmentationConfig {
        self.segmentation_config.unwrap_or_default()
    }

    /// Glyph with the corpus baseline filled in.
    pub fn resolved_glyph(&self, id: &str) -> Option<Glyph> {
        self.glyph(id).map(|g| self.corpus.resolved_glyph(g))
    }

    /// Automatic landmarks adjusted by the recorded manual edits.
    pub fn effective_landmarks(&self, g: &Glyph, auto: &[LandmarkPoint]) -> Vec<LandmarkPoint> {
        let empty = Vec::new();
        effective_landmarks(
            auto,
            self.manual_landmarks.get(&g.id).unwrap_or(&empty),
            self.suppressed_landmarks.get(&g.id).map(Vec::as_slice).unwrap_or(&[]),
            g.tolerance().max(1e-12),
        )
    }

    /// Version, uniqueness, referential and coverage checks.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(self.format_version.clone()));
        }
        self.corpus.validate()?;
        for g in &self.corpus.glyphs {
            g.validate()
                .into_result()
                .map_err(|e| Error::invalid(format!("glyph {:?}: {e}", g.id)))?;
        }
        let missing = |kind: &str, id: &str| Error::Integrity(format!("{kind} references missing glyph {id:?}"));
        for (id, t) in &self.trajectories {
            let g = self.glyph(id).ok_or_else(|| missing("trajectory", id))?;
            if t.glyph_id != *id {
                return Err(Error::Integrity(format!(
                    "trajectory stored under {id:?} names glyph {:?}",
                    t.glyph_id
                )));
            }
            t.validate(g)
                .map_err(|e| Error::invalid(format!("trajectory of {id:?}: {e}")))?;
        }
        for (id, cands) in &self.candidates {
            let g = self.glyph(id).ok_or_else(|| missing("candidate list", id))?;
            for c in cands {
                c.trajectory
                    .validate(g)
                    .map_err(|e| Error::invalid(format!("candidate of {id:?}: {e}")))?;
            }
        }
        for id in self.manual_landmarks.keys() {
            self.glyph(id).ok_or_else(|| missing("manual landmark list", id))?;
        }
        for id in self.suppressed_landmarks.keys() {
            self.glyph(id).ok_or_else(|| missing("suppressed landmark list", id))?;
        }
        if let Some(cfg) = &self.segmentation_config {
            cfg.validate()?;
        }
        Ok(())
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r = (x * 1e9).round() / 1e9;
            let r = if r == 0.0 { 0.0 } else { r };
            if let Some(num) = serde_json::Number::from_f64(r) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Canonical JSON text for any serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parse and validate a corpus document from JSON text.
pub fn parse_corpus(text: &str) -> Result<CorpusDocument> {
    let raw: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    match raw.get("format_version") {
        Some(Value::String(v)) if v == FORMAT_VERSION => {}
        Some(Value::String(v)) => return Err(Error::UnsupportedVersion(v.clone())),
        Some(other) => return Err(Error::UnsupportedVersion(other.to_string())),
        None => return Err(Error::Parse("missing format_version".into())),
    }
    let doc: CorpusDocument = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    doc.validate()?;
    Ok(doc)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<CorpusDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_corpus(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn corpus_to_string(doc: &CorpusDocument) -> Result<String> {
    doc.validate()?;
    to_canonical_json(doc)
}

pub fn save_corpus(doc: &CorpusDocument, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, corpus_to_string(doc)?.as_bytes())
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Six significant digits, trailing zeros trimmed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_sig6).unwrap_or_default()
}

/// CSV bytes from a header and rows.
pub fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// One row per glyph: `glyph_id` then every scalar metric alphabetically.
pub fn records_csv(records: &[MetricRecord]) -> Result<Vec<u8>> {
    if records.is_empty() {
        return Err(Error::invalid("no metric records to export"));
    }
    let mut header = vec!["glyph_id".to_string()];
    header.extend(MetricRecord::scalar_names().into_iter().map(String::from));
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let mut row = vec![r.glyph_id.clone()];
            row.extend(r.scalars().into_iter().map(|(_, v)| cell(v)));
            row
        })
        .collect();
    csv_bytes(&header, &rows)
}

/// Metric means: `metric,mean,weighted_mean`.
pub fn script_means_csv(m: &ScriptMetrics) -> Result<Vec<u8>> {
    let header: Vec<String> = ["metric", "mean", "weighted_mean"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = m
        .means
        .iter()
        .map(|(k, v)| {
            let w = m.weighted_means.as_ref().and_then(|w| w.get(k).copied().flatten());
            vec![k.clone(), cell(*v), cell(w)]
        })
        .collect();
    csv_bytes(&header, &rows)
}

/// Long-form histogram table: `count,lower,metric,upper`.
pub fn histograms_csv(histograms: &BTreeMap<String, Histogram>) -> Result<Vec<u8>> {
    let header: Vec<String> = ["count", "lower", "metric", "upper"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for (name, h) in histograms {
        for (i, c) in h.counts.iter().enumerate() {
            rows.push(vec![
                c.to_string(),
                format_sig6(h.edges[i]),
                name.clone(),
                format_sig6(h.edges[i + 1]),
            ]);
        }
    }
    csv_bytes(&header, &rows)
}

/// Square matrix with glyph ids as header row and first column.
pub fn similarity_csv(m: &SimilarityMatrix) -> Result<Vec<u8>> {
    let mut header = vec!["glyph_id".to_string()];
    header.extend(m.glyph_ids.iter().cloned());
    let rows: Vec<Vec<String>> = m
        .glyph_ids
        .iter()
        .zip(&m.values)
        .map(|(id, row)| {
            let mut r = vec![id.clone()];
            r.extend(row.iter().map(|v| cell(*v)));
            r
        })
        .collect();
    csv_bytes(&header, &rows)
}

/// Normalized and raw values per field, one row per script or glyph.
pub fn parallel_coordinates_csv(pc: &ParallelCoordinates) -> Result<Vec<u8>> {
    let mut order: Vec<usize> = (0..pc.fields.len()).collect();
    order.sort_by(|&a, &b| pc.fields[a].cmp(&pc.fields[b]));
    let mut header: Vec<String> = ["kind", "label", "script_id"].map(String::from).to_vec();
    for &i in &order {
        header.push(pc.fields[i].clone());
        header.push(format!("{}_raw", pc.fields[i]));
    }
    let mut rows = Vec::new();
    for r in &pc.rows {
        let kind = match r.kind {
            RowKind::Script => "script",
            RowKind::Glyph => "glyph",
        };
        let mut row = vec![kind.to_string(), r.label.clone(), r.script_id.clone()];
        for &i in &order {
            row.push(cell(r.normalized[i]));
            row.push(cell(r.raw[i]));
        }
        rows.push(row);
    }
    csv_bytes(&header, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(8.0), "8");
        assert_eq!(format_sig6(1.0 / 3.0), "0.333333");
        assert_eq!(format_sig6(1234567.0), "1.23457e6");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(std::f64::consts::PI * 1e-7), "3.14159e-7");
    }

    #[test]
    fn version_and_parse_errors() {
        let bad = r#"{"format_version": "9.9", "corpus": {}}"#;
        assert!(matches!(parse_corpus(bad), Err(Error::UnsupportedVersion(_))));
        let broken = "{\n\"format_version\": \"1.0\",\n\"corpus\": 5}";
        match parse_corpus(broken) {
            Err(Error::Parse(m)) => assert!(m.contains("line 3")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
