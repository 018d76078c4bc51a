use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
///
/// Verification checks do not use this type to signal a failed property;
/// those failures are carried in the verdict of a [`crate::report::CheckReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },

    #[error("shape mismatch: {left} vs {right}")]
    Shape { left: usize, right: usize },

    #[error("dimension {dim} is not supported here: {reason}")]
    Size { dim: usize, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("eigenvalue at angle {angle} lies within {tol} rad of the branch cut at -1")]
    BranchCut { angle: f64, tol: f64 },

    #[error("degenerate column: entry ({row}, {col}) vanishes")]
    DegenerateColumn { row: usize, col: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parameter {value} outside the admissible window {window}")]
    Window { value: f64, window: String },

    #[error("base diagonal has repeated entries at {i} and {j}")]
    DegenerateBase { i: usize, j: usize },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
