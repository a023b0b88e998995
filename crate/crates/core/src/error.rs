use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element does not belong to this algebra: {0}")]
    ModeMismatch(String),
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeOverCap { degree: usize, cap: usize },
    #[error("invalid p-map: {0}")]
    InvalidPmap(String),
    #[error("cannot parse scalar `{0}`")]
    ScalarParse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
