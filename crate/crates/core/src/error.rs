use thiserror::Error;

use crate::degree::TriDegree;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("presentation error: {0}")]
    Presentation(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("ambiguous higher differential on {label} at {degree}: {candidates} candidate values")]
    Ambiguity { label: String, degree: TriDegree, candidates: usize },
    #[error("comparison mismatch: {0}")]
    Mismatch(String),
    #[error("ledger error: {0}")]
    Ledger(String),
    #[error("crossing extension in column (s={s}, w={w}): {detail}")]
    CrossingExtension { s: i64, w: i64, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;
