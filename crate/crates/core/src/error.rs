use thiserror::Error;

use crate::lumpability::LumpabilityVerdict;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("transition matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NonSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("state list has {states} labels but the matrix has {rows} rows")]
    LabelCountMismatch { states: usize, rows: usize },

    #[error("a chain needs at least one state")]
    EmptyChain,

    #[error("row {row} sums to {}, outside tolerance", 1.0 + .deviation)]
    RowSumOutOfTolerance { row: usize, deviation: f64 },

    #[error("negative probability at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("non-finite probability at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid aggregation map: {0}")]
    InvalidAggregation(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("chain is not lumpable under the given partition: {0}")]
    NotLumpable(Box<LumpabilityVerdict>),

    #[error("event kernel invalid: {0}")]
    KernelInvalid(String),

    #[error("state {index} does not share the projection of state 0")]
    ProjectionMismatch { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("compiled state space has {states} states, limit is {limit}")]
    StateSpaceTooLarge { states: u128, limit: usize },

    #[error("symbol {symbol} in trajectory {trajectory} is outside the alphabet 0..{k}")]
    SymbolOutOfRange {
        trajectory: usize,
        symbol: usize,
        k: usize,
    },

    #[error("trajectory {trajectory} has length {len}, need at least {min}")]
    TrajectoryTooShort {
        trajectory: usize,
        len: usize,
        min: usize,
    },

    #[error("{0} did not converge within the iteration cap")]
    NonConvergence(&'static str),

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
