use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("item index {index} out of range for {len} items")]
    ItemOutOfRange { index: usize, len: usize },

    #[error("test index {index} out of range for {len} tests")]
    TestOutOfRange { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("enumeration of {needed} subsets exceeds the budget of {budget}")]
    Budget { needed: u128, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid set system: {0}")]
    InvalidSetSystem(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid covering: {0}")]
    InvalidCovering(String),

    #[error("decoded {} items, expected {expected}", found.len())]
    CardinalityMismatch { expected: usize, found: Vec<usize> },

    #[error("no admissible subset matches the outcome")]
    NoMatch,

    #[error("outcome is consistent with more than one subset: {0:?} and {1:?}")]
    Ambiguous(Vec<usize>, Vec<usize>),

    #[error("constructed configuration is not equivalent to {0}")]
    EquivalenceFailure(String),

    #[error("coordinate {0} does not fit in a 64-bit integer")]
    CoordinateOverflow(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
