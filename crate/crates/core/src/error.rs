use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field: {0}")]
    Field(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown basis element '{0}'")]
    UnknownBasis(String),
    #[error("incompatible chain: {0}")]
    Incompatible(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid algebra: {0}")]
    Algebra(String),
    #[error("not filtration-nilpotent: {0}")]
    NotNilpotent(String),
    #[error("Maurer-Cartan violated: {0}")]
    MaurerCartan(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("not homologically trivial: {0}")]
    NotTrivial(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    Degree { expected: i64, found: i64 },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
