//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimensions must be at least 1x1 (got {rows}x{cols})")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("entry out of range: {0}")]
    ValueOutOfRange(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("search budget exceeded: {required} elementary evaluations needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("matrix is singular over GF(2)")]
    Singular,

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("divisibility violated: {0}")]
    Divisibility(String),

    #[error("malformed bijection: {0}")]
    MalformedBijection(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
