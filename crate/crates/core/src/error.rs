use thiserror::Error;

/// Errors produced by the glyph analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("curvature undefined at t = {t}: first derivative vanishes")]
    CurvatureUndefined { t: f64 },

    #[error("degenerate glyph: {0}")]
    DegenerateGlyph(String),

    #[error("reconstruction failed: {0}")]
    ReconstructionFailed(String),

    #[error("{metric} undefined: {reason}")]
    MetricUndefined { metric: &'static str, reason: String },

    #[error("{metric} unavailable: {reason}")]
    MetricUnavailable { metric: &'static str, reason: String },

    #[error("unsupported corpus format version {0:?}")]
    UnsupportedVersion(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown glyph {0:?}")]
    UnknownGlyph(String),

    #[error("glyph {0:?} has no trajectory")]
    MissingTrajectory(String),

    #[error("referential integrity: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn undefined(metric: &'static str, reason: impl Into<String>) -> Self {
        Error::MetricUndefined {
            metric,
            reason: reason.into(),
        }
    }
}
