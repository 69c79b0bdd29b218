//! HTTP annotation service over a single corpus document.
//!
//! Every response body is a JSON object with a `revision` field. Mutating
//! requests carry `expected_revision`; a mismatch is answered with 409 and
//! leaves the document untouched.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use glyphometrics::geometry::fit_spline;
use glyphometrics::io::{corpus_to_string, parse_corpus, save_corpus, CorpusDocument};
use glyphometrics::metrics::{DistinctivityMode, MetricOptions, DEFAULT_RESAMPLE};
use glyphometrics::pipeline::{analyze_corpus, analyze_glyph, current_landmarks, edit_landmarks};
use glyphometrics::reconstruct::{reconstruct, select_trajectory, CostWeights, ReconstructionConfig};
use glyphometrics::script::{aggregate, similarity_matrix, Binning, Weighting};
use glyphometrics::{Error, Glyph, Point, Provenance, Trajectory};
use serde::Deserialize;
use serde_json::{json, Value};

/// The open document and its bookkeeping.
#[derive(Debug)]
pub struct Session {
    pub doc: CorpusDocument,
    pub path: PathBuf,
    pub revision: u64,
    pub dirty: bool,
}

#[derive(Debug, Clone)]
pub struct AppState(Arc<RwLock<Session>>);

impl AppState {
    /// Serve `doc`, saving to `path`. The document is held in canonical form.
    pub fn new(doc: CorpusDocument, path: impl Into<PathBuf>) -> Result<Self, Error> {
        doc.validate()?;
        Ok(AppState(Arc::new(RwLock::new(Session {
            doc: canonical(&doc)?,
            path: path.into(),
            revision: 0,
            dirty: false,
        }))))
    }

    pub fn read(&self) -> RwLockReadGuard<'_, Session> {
        self.0.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, Session> {
        self.0.write().unwrap_or_else(|e| e.into_inner())
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/corpus", get(get_corpus))
        .route("/glyphs/{id}", get(get_glyph))
        .route("/glyphs/{id}/reconstruct", post(post_reconstruct))
        .route("/glyphs/{id}/trajectory", axum::routing::put(put_trajectory))
        .route("/glyphs/{id}/landmarks", axum::routing::patch(patch_landmarks))
        .route("/glyphs/{id}/segments", post(post_segments))
        .route("/script/stats", get(get_stats))
        .route("/save", post(post_save))
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    revision: u64,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>, revision: u64) -> Self {
        ApiError {
            status,
            message: message.into(),
            revision,
        }
    }

    fn from_core(e: Error, revision: u64) -> Self {
        let status = match e {
            Error::UnknownGlyph(_) => StatusCode::NOT_FOUND,
            Error::Io(_) | Error::Csv(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, e.to_string(), revision)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.message, "revision": self.revision });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T = Json<Value>> = Result<T, ApiError>;

/// The document as it would read back from disk.
fn canonical(doc: &CorpusDocument) -> Result<CorpusDocument, Error> {
    parse_corpus(&corpus_to_string(doc)?)
}

impl Session {
    fn check_revision(&self, expected: u64) -> ApiResult<()> {
        if expected == self.revision {
            Ok(())
        } else {
            Err(ApiError::new(
                StatusCode::CONFLICT,
                format!("stale revision {expected}, current is {}", self.revision),
                self.revision,
            ))
        }
    }

    fn require_glyph(&self, id: &str) -> ApiResult<()> {
        match self.doc.glyph(id) {
            Some(_) => Ok(()),
            None => Err(ApiError::from_core(Error::UnknownGlyph(id.to_string()), self.revision)),
        }
    }

    /// Apply `op` to a copy of the document and keep it only on success.
    fn mutate<T>(&mut self, op: impl FnOnce(&mut CorpusDocument) -> Result<T, Error>) -> ApiResult<T> {
        let mut doc = self.doc.clone();
        let rev = self.revision;
        let fail = move |e| ApiError::from_core(e, rev);
        let out = op(&mut doc).map_err(fail)?;
        self.doc = canonical(&doc).map_err(fail)?;
        self.revision += 1;
        self.dirty = true;
        Ok(out)
    }

    fn glyph_view(&self, id: &str) -> ApiResult<Value> {
        let doc = &self.doc;
        let glyph = doc
            .glyph(id)
            .ok_or_else(|| ApiError::from_core(Error::UnknownGlyph(id.to_string()), self.revision))?;
        let analysis = analyze_glyph(doc, id, &MetricOptions::default());
        let landmarks = current_landmarks(doc, id).unwrap_or_default();
        let (segmentation, metrics, analysis_error) = match analysis {
            Ok(a) => (Some(a.segmentation), Some(a.metrics), None),
            Err(e) => (None, None, Some(e.to_string())),
        };
        Ok(json!({
            "revision": self.revision,
            "glyph": glyph,
            "trajectory": doc.trajectories.get(id),
            "candidates": doc.candidates.get(id).cloned().unwrap_or_default(),
            "landmarks": landmarks,
            "segmentation": segmentation,
            "metrics": metrics,
            "analysis_error": analysis_error,
        }))
    }
}

async fn get_corpus(State(state): State<AppState>) -> Json<Value> {
    let s = state.read();
    let c = &s.doc.corpus;
    let glyphs: Vec<Value> = c
        .glyphs
        .iter()
        .map(|g| {
            json!({
                "id": g.id,
                "label": g.label,
                "segments": g.segments.len(),
                "has_trajectory": s.doc.trajectories.contains_key(&g.id),
                "candidates": s.doc.candidates.get(&g.id).map_or(0, Vec::len),
            })
        })
        .collect();
    Json(json!({
        "revision": s.revision,
        "dirty": s.dirty,
        "id": c.id,
        "name": c.name,
        "baseline_y": c.baseline_y,
        "glyphs": glyphs,
    }))
}

async fn get_glyph(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult {
    state.read().glyph_view(&id).map(Json)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructRequest {
    pub expected_revision: u64,
    #[serde(default)]
    pub weights: Option<CostWeights>,
    #[serde(default)]
    pub max_candidates: Option<usize>,
}

async fn post_reconstruct(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<ReconstructRequest>,
) -> ApiResult {
    let mut s = state.write();
    s.require_glyph(&id)?;
    s.check_revision(req.expected_revision)?;
    let defaults = ReconstructionConfig::default();
    let cfg = ReconstructionConfig {
        weights: req.weights.unwrap_or(defaults.weights),
        max_candidates: req.max_candidates.unwrap_or(defaults.max_candidates),
        ..defaults
    };
    s.mutate(|doc| {
        cfg.validate()?;
        let glyph = doc.glyph(&id).expect("checked above");
        let candidates = reconstruct(glyph, &cfg)?;
        doc.candidates.insert(id.clone(), candidates);
        Ok(())
    })?;
    Ok(Json(json!({ "revision": s.revision, "candidates": s.doc.candidates[&id] })))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryRequest {
    pub expected_revision: u64,
    #[serde(default)]
    pub candidate_index: Option<usize>,
    #[serde(default)]
    pub trajectory: Option<Trajectory>,
}

async fn put_trajectory(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<TrajectoryRequest>,
) -> ApiResult {
    let mut s = state.write();
    s.require_glyph(&id)?;
    s.check_revision(req.expected_revision)?;
    s.mutate(|doc| {
        let glyph = doc.glyph(&id).expect("checked above");
        let t = match (req.candidate_index, req.trajectory) {
            (Some(i), None) => {
                let cands = doc.candidates.get(&id).map(Vec::as_slice).unwrap_or(&[]);
                select_trajectory(glyph, cands, i)?
            }
            (None, Some(mut t)) => {
                if t.glyph_id != id {
                    return Err(Error::InvalidInput(format!(
                        "trajectory names glyph {:?}, expected {id:?}",
                        t.glyph_id
                    )));
                }
                t.validate(glyph)?;
                t.provenance = Provenance::Manual;
                t
            }
            _ => {
                return Err(Error::InvalidInput(
                    "give exactly one of candidate_index and trajectory".into(),
                ))
            }
        };
        doc.trajectories.insert(id.clone(), t);
        Ok(())
    })?;
    s.glyph_view(&id).map(Json)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandmarkRequest {
    pub expected_revision: u64,
    #[serde(default)]
    pub add: Vec<Point>,
    #[serde(default)]
    pub remove: Vec<usize>,
}

async fn patch_landmarks(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<LandmarkRequest>,
) -> ApiResult {
    let mut s = state.write();
    s.require_glyph(&id)?;
    s.check_revision(req.expected_revision)?;
    s.mutate(|doc| edit_landmarks(doc, &id, &req.add, &req.remove))?;
    s.glyph_view(&id).map(Json)
}

/// Freehand strokes to fit and add to a glyph, creating it when absent.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentsRequest {
    pub expected_revision: u64,
    pub polylines: Vec<Vec<Point>>,
    /// Fitting tolerance in corpus units; defaults to 0.5% of the drawing's diagonal.
    #[serde(default)]
    pub max_error: Option<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

const DEFAULT_FIT_FRACTION: f64 = 0.005;

fn fit_polylines(polylines: &[Vec<Point>], max_error: Option<f64>) -> Result<Vec<glyphometrics::SplineSegment>, Error> {
    let all: Vec<Point> = polylines.iter().flatten().copied().collect();
    if polylines.is_empty() || all.is_empty() {
        return Err(Error::InvalidInput("no polylines given".into()));
    }
    let (mut lo, mut hi) = (all[0], all[0]);
    for p in &all {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let tol = max_error.unwrap_or(DEFAULT_FIT_FRACTION * lo.distance(hi));
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("max_error must be positive, got {tol}")));
    }
    polylines.iter().map(|pl| fit_spline(pl, tol)).collect()
}

async fn post_segments(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<SegmentsRequest>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let mut s = state.write();
    s.check_revision(req.expected_revision)?;
    let created = s.doc.glyph(&id).is_none();
    s.mutate(|doc| {
        let fitted = fit_polylines(&req.polylines, req.max_error)?;
        let script_id = doc.corpus.id.clone();
        let glyph = match doc.corpus.glyphs.iter_mut().find(|g| g.id == id) {
            Some(g) => g,
            None => {
                doc.corpus.glyphs.push(Glyph::new(id.clone(), script_id, Vec::new()));
                doc.corpus.glyphs.last_mut().expect("just pushed")
            }
        };
        glyph.segments.extend(fitted);
        if req.label.is_some() {
            glyph.label = req.label.clone();
        }
        let glyph = glyph.clone();
        glyph.validate().into_result()?;
        doc.manual_landmarks.remove(&id);
        doc.suppressed_landmarks.remove(&id);
        let candidates = reconstruct(&glyph, &ReconstructionConfig::default())?;
        doc.trajectories.insert(id.clone(), select_trajectory(&glyph, &candidates, 0)?);
        doc.candidates.insert(id.clone(), candidates);
        Ok(())
    })?;
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(s.glyph_view(&id)?)))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsQuery {
    #[serde(default)]
    pub mode: DistinctivityMode,
    #[serde(default = "default_resample")]
    pub resample: usize,
    #[serde(default)]
    pub weighting: Weighting,
}

fn default_resample() -> usize {
    DEFAULT_RESAMPLE
}

async fn get_stats(State(state): State<AppState>, Query(q): Query<StatsQuery>) -> ApiResult {
    let s = state.read();
    let doc = &s.doc;
    let fail = |e: Error| ApiError::from_core(e, s.revision);
    let mut glyphs = Vec::new();
    let mut records = Vec::new();
    let mut failures = BTreeMap::new();
    for (id, r) in analyze_corpus(doc, &MetricOptions::default()) {
        match r {
            Ok(a) => {
                glyphs.push(a.glyph);
                records.push(a.metrics);
            }
            Err(e) => {
                failures.insert(id, e.to_string());
            }
        }
    }
    let metrics = aggregate(&doc.corpus.id, &glyphs, &records, q.weighting, Binning::default()).map_err(fail)?;
    let resolved: Vec<Glyph> = doc.corpus.glyphs.iter().map(|g| doc.corpus.resolved_glyph(g)).collect();
    let similarity = if resolved.len() >= 2 {
        let items: Vec<_> = resolved.iter().map(|g| (g, doc.trajectories.get(&g.id))).collect();
        Some(similarity_matrix(&items, q.mode, q.resample).map_err(fail)?)
    } else {
        None
    };
    Ok(Json(json!({
        "revision": s.revision,
        "metrics": metrics,
        "similarity": similarity,
        "failures": failures,
    })))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaveRequest {
    #[serde(default)]
    pub expected_revision: Option<u64>,
}

async fn post_save(State(state): State<AppState>, body: Option<Json<SaveRequest>>) -> ApiResult {
    let mut s = state.write();
    let req = body.map(|Json(r)| r).unwrap_or_default();
    if let Some(expected) = req.expected_revision {
        s.check_revision(expected)?;
    }
    save_corpus(&s.doc, &s.path).map_err(|e| ApiError::from_core(e, s.revision))?;
    s.dirty = false;
    Ok(Json(json!({ "revision": s.revision, "path": s.path })))
}
