use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dependent vector set: vector {index} lies in the span of the preceding ones")]
    DependentSet { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {dim} (maximum {max})")]
    UnsupportedDimension { dim: usize, max: usize },
    #[error("invalid mass cloud: {0}")]
    InvalidCloud(String),
    #[error("invalid flat: {0}")]
    InvalidFlat(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("region is empty, no barycenter")]
    EmptyRegion,
    #[error("malformed linear program: {0}")]
    MalformedLp(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
