use thiserror::Error;

/// Errors raised across the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("enumeration cap of {cap} path sets exceeded")]
    CapExceeded { cap: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("size {size} exceeds the exact-procedure limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("entry ({row}, {col}) is not proper")]
    ImproperEntry { row: usize, col: usize },
    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
