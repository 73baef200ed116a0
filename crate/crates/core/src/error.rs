use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must have at least one row")]
    Empty,

    #[error("row {row} has {len} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("entry ({row}, {col}) = {value} is negative or not finite")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: f64 },

    #[error("diagonal entry {index} is not positive")]
    ZeroDiagonal { index: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("index set must not be empty")]
    EmptyIndexSet,

    #[error("time window [{start}, {end}] is outside horizon {horizon}")]
    OutOfHorizon {
        start: usize,
        end: usize,
        horizon: usize,
    },

    #[error("horizon must be at least 1")]
    ZeroHorizon,

    #[error("sequence does not have positive diagonals")]
    NotPositiveDiagonal,

    #[error("segmentation did not stabilize within the horizon")]
    Unstabilized,

    #[error("index set is not closed under the segment pattern")]
    NotClosed,

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("infeasible generator: {0}")]
    InfeasibleGenerator(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
