use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected} for dims {dim_a}x{dim_b}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        dim_a: usize,
        dim_b: usize,
    },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("not Hermitian: max |M - M^dagger| = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("trace not one: |Tr M - 1| = {residual:e} exceeds {tolerance:e}")]
    TraceNotOne { residual: f64, tolerance: f64 },
    #[error("not positive semidefinite: min eigenvalue {min_eigenvalue:e} below -{tolerance:e}")]
    NotPositive { min_eigenvalue: f64, tolerance: f64 },
    #[error("not normalized: | ||psi|| - 1 | = {residual:e} exceeds {tolerance:e}")]
    NotNormalized { residual: f64, tolerance: f64 },
    #[error("not unitary: max |U^dagger U - I| = {residual:e} exceeds {tolerance:e}")]
    NotUnitary { residual: f64, tolerance: f64 },
    #[error("invalid rank {rank}: must lie in 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("invalid dimensions {dim_a}x{dim_b}: {reason}")]
    InvalidDimensions {
        dim_a: usize,
        dim_b: usize,
        reason: &'static str,
    },
    #[error("expected a {expected_a}x{expected_b} state, got {dim_a}x{dim_b}")]
    WrongDimensions {
        expected_a: usize,
        expected_b: usize,
        dim_a: usize,
        dim_b: usize,
    },
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("index pair (i={i}, j={j}, k={k}, l={l}) invalid for dims {dim_a}x{dim_b}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        dim_a: usize,
        dim_b: usize,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("malformed density-matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
