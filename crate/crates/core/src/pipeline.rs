//! Document-level analysis: landmarks, segmentation and metrics for stored glyphs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::glyph::{Glyph, LandmarkKind, LandmarkPoint, LandmarkSource, NormalizeMode, Trajectory};
use crate::io::CorpusDocument;
use crate::metrics::{compute_all, MetricOptions, MetricRecord};
use crate::segment::{detect_landmarks, distance_to_path, segment_strokes, SegmentationResult};

/// Everything derived for one glyph of a document.
#[derive(Debug, Clone)]
pub struct GlyphAnalysis {
    /// The analysed glyph, normalized when the options ask for it.
    pub glyph: Glyph,
    pub trajectory: Trajectory,
    pub segmentation: SegmentationResult,
    pub metrics: MetricRecord,
}

/// Segment and measure one glyph using the document's config and manual landmark edits.
///
/// Landmarks are found and edited in the stored coordinates; with
/// `opts.normalize` set, glyph and landmarks are then mapped into the
/// normalized frame before segmentation.
pub fn analyze_glyph(doc: &CorpusDocument, id: &str, opts: &MetricOptions) -> Result<GlyphAnalysis> {
    let glyph = doc.resolved_glyph(id).ok_or_else(|| Error::UnknownGlyph(id.to_string()))?;
    let trajectory = doc
        .trajectories
        .get(id)
        .cloned()
        .ok_or_else(|| Error::MissingTrajectory(id.to_string()))?;
    let cfg = doc.segmentation_config();
    let auto = detect_landmarks(&glyph, &trajectory, &cfg)?;
    let mut landmarks = doc.effective_landmarks(&glyph, &auto);
    let glyph = if opts.normalize == NormalizeMode::None {
        glyph
    } else {
        let (origin, scale) = glyph.normalization(opts.normalize)?;
        for l in &mut landmarks {
            l.location = (l.location - origin) * scale;
        }
        glyph.transformed(|p| (p - origin) * scale)
    };
    let segmentation = segment_strokes(&glyph, &trajectory, &landmarks, &cfg)?;
    let metrics = compute_all(&glyph, &trajectory, &segmentation, opts)?;
    Ok(GlyphAnalysis {
        glyph,
        trajectory,
        segmentation,
        metrics,
    })
}

/// [`analyze_glyph`] for every glyph, in corpus order.
pub fn analyze_corpus(doc: &CorpusDocument, opts: &MetricOptions) -> Vec<(String, Result<GlyphAnalysis>)> {
    doc.corpus
        .glyphs
        .par_iter()
        .map(|g| (g.id.clone(), analyze_glyph(doc, &g.id, opts)))
        .collect()
}

/// Effective landmarks of a stored glyph, in the order [`edit_landmarks`] indexes them.
pub fn current_landmarks(doc: &CorpusDocument, id: &str) -> Result<Vec<LandmarkPoint>> {
    let glyph = doc.resolved_glyph(id).ok_or_else(|| Error::UnknownGlyph(id.to_string()))?;
    let trajectory = doc
        .trajectories
        .get(id)
        .ok_or_else(|| Error::MissingTrajectory(id.to_string()))?;
    let auto = detect_landmarks(&glyph, trajectory, &doc.segmentation_config())?;
    Ok(doc.effective_landmarks(&glyph, &auto))
}

/// Record a landmark override in the document.
///
/// `remove` indexes the glyph's current effective landmarks. Removing a
/// manual landmark deletes it; removing an automatic one suppresses its
/// location. Each added point must lie on the trajectory path; adding back a
/// suppressed location lifts the suppression.
pub fn edit_landmarks(doc: &mut CorpusDocument, id: &str, add: &[Point], remove: &[usize]) -> Result<()> {
    let current = current_landmarks(doc, id)?;
    let glyph = doc.resolved_glyph(id).ok_or_else(|| Error::UnknownGlyph(id.to_string()))?;
    let trajectory = doc
        .trajectories
        .get(id)
        .ok_or_else(|| Error::MissingTrajectory(id.to_string()))?;
    let tol = glyph.tolerance().max(1e-12);
    if let Some(&bad) = remove.iter().find(|&&i| i >= current.len()) {
        return Err(Error::InvalidInput(format!(
            "landmark index {bad} out of range ({} landmarks)",
            current.len()
        )));
    }
    for q in add {
        let d = distance_to_path(&glyph, trajectory, *q);
        if !(d <= tol) {
            return Err(Error::InvalidInput(format!(
                "landmark ({}, {}) is {d} away from the trajectory (tolerance {tol})",
                q.x, q.y
            )));
        }
    }

    let mut manual = doc.manual_landmarks.remove(id).unwrap_or_default();
    let mut suppressed = doc.suppressed_landmarks.remove(id).unwrap_or_default();
    for &i in remove {
        let l = current[i];
        match l.source {
            LandmarkSource::Manual => manual.retain(|m| m.location.distance(l.location) > tol),
            LandmarkSource::Auto => suppressed.push(l.location),
        }
    }
    for &q in add {
        if let Some(k) = suppressed.iter().position(|p| p.distance(q) <= tol) {
            suppressed.remove(k);
        } else if !manual.iter().any(|m| m.location.distance(q) <= tol) {
            manual.push(LandmarkPoint {
                location: q,
                kind: LandmarkKind::CurvatureExtremum,
                source: LandmarkSource::Manual,
            });
        }
    }
    if !manual.is_empty() {
        doc.manual_landmarks.insert(id.to_string(), manual);
    }
    if !suppressed.is_empty() {
        doc.suppressed_landmarks.insert(id.to_string(), suppressed);
    }
    Ok(())
}
