//! Error type shared by all modules.
//!
//! Offending points are reported in `f64` regardless of the scalar type the
//! run used, which keeps the error type free of generic parameters.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PartXError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid hyperbox: {0}")]
    InvalidHyperbox(String),

    #[error("invalid training set: {0}")]
    InvalidTrainingSet(String),

    #[error("correlation matrix factorization failed after jitter escalation up to {max_jitter:e}")]
    FactorizationFailure { max_jitter: f64 },

    #[error("quantile level must lie strictly inside (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("hyperbox has a zero-length side in dimension {dim}")]
    EmptyBox { dim: usize },

    #[error("objective evaluation failed at {point:?}: {message}")]
    EvaluationError { point: Vec<f64>, message: String },

    #[error("region has no branchable dimension")]
    NoBranchableDimension,

    #[error("region carries no quantile estimate")]
    MissingQuantiles,

    #[error("node {0} is not a leaf")]
    NotALeaf(usize),

    #[error("probability out of range: {0}")]
    InvalidProbability(f64),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("sample {row} lies outside the domain")]
    PointOutsideDomain { row: usize },
}

pub type Result<T> = std::result::Result<T, PartXError>;
