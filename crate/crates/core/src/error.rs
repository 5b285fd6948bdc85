use alloc::string::String;

use thiserror::Error;

use crate::subsets::LabelSubset;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: need d >= 2")]
    InvalidDimension(usize),

    #[error("displacement operators need odd d, got d = {0}")]
    DisplacementUnavailable(usize),

    #[error("label {label} outside 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("ill-conditioned system for subset {subset}: smallest eigenvalue {min_eigenvalue:e}")]
    Conditioning {
        subset: LabelSubset,
        min_eigenvalue: f64,
    },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("{what}: size {size} exceeds the enumeration cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
