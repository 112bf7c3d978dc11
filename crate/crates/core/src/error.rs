use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("zero matrix")]
    ZeroMatrix,
    #[error("rank deficient: {rows} rows but rank {rank}")]
    RankDeficient { rows: usize, rank: usize },
    #[error("matrix is not in standard form")]
    NotStandardForm,
    #[error("column {} is zero", .0 + 1)]
    ZeroColumn(usize),
    #[error("enumeration of {needed} elements exceeds budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("not in class: {0}")]
    NotInClass(String),
    #[error("point set is not invariant")]
    NotInvariant,
    #[error("not an element of L: {0}")]
    NotInL(String),
    #[error("not an element of the enveloping group")]
    NotInG,
    #[error("diagonal entry {} is zero", .0 + 1)]
    ZeroDiagonal(usize),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
