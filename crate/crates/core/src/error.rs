//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("radius schedule too short: need coverage up to ln radius {needed_ln}, have {have_ln}")]
    ScheduleTooShort { needed_ln: f64, have_ln: f64 },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("invariance defect {measured:e} above tolerance {tolerance:e}; refusing extraction")]
    DefectTooLarge { measured: f64, tolerance: f64 },

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
