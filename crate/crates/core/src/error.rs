//! Error type shared across the crate.
//!
//! Variants are split by how the CLI must exit: configuration problems
//! (bad parameters, unknown names, incompatible baselines) map to exit
//! code 2, everything that can only surface while running maps to 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or allocation shapes disagree (row length, user count, ...).
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A user or basestation index is out of range for the given shape.
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),

    /// A parameter violates a documented precondition (beta <= 1, r >= n, ...).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A name was not found in the algorithm/family/model registry.
    #[error("unknown name: {0}")]
    UnknownName(String),

    /// The requested exact computation exceeds the enumeration guard.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// An online algorithm broke the execution contract mid-run.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Weights are not finite, usually an overflowed geometric family.
    #[error("non-finite weight: {0}")]
    NonFinite(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that are detectable from the configuration alone,
    /// before any randomness or data is touched. The CLI exits 2 on these.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParam(_) | Error::UnknownName(_) | Error::ShapeMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
