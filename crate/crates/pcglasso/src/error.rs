use thiserror::Error;

/// Errors surfaced by the estimation, simulation and IO routines.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in, so the error type stays non-generic.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot} failed)")]
    NotPositiveDefinite { pivot: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {deviation:e}")]
    NotSymmetric { i: usize, j: usize, deviation: f64 },

    #[error("diagonal entry {index} is not strictly positive ({value})")]
    NonPositiveDiagonal { index: usize, value: f64 },

    #[error("degenerate determinant-quadratic fit at block ({i},{j})")]
    DegenerateQuadratic { i: usize, j: usize },

    #[error("block update has an empty feasible interval")]
    EmptyFeasibleInterval,

    #[error("no feasible candidate found for a block update")]
    NoFeasibleCandidate,

    #[error("root finder did not converge within {iterations} iterations")]
    RootFinderDiverged { iterations: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("column {name} has zero variance")]
    ConstantColumn { name: String },

    #[error("csv parse error at row {row}: {message}")]
    CsvParse { row: usize, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
