use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation too small: {mass:.3e} probability mass beyond n_cut={n_cut} (tolerance {tolerance:.1e})")]
    TruncationTooSmall { n_cut: usize, mass: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero-probability outcome at passage index {passage} (0-based; p = {probability:.3e})")]
    ZeroProbabilityOutcome { passage: usize, probability: f64 },

    #[error("state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("vector has vanishing norm")]
    ZeroVector,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("records do not form a complete rectangular grid")]
    IncompleteGrid,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
