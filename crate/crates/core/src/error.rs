use thiserror::Error;

/// Errors raised by the exact arithmetic, linear algebra and rank routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic index mismatch: {0} vs {1}")]
    IndexMismatch(u64, u64),
    #[error("cannot embed index {from} into index {to}")]
    BadEmbedding { from: u64, to: u64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("block is not an element of the division algebra: {0}")]
    NotInAlgebra(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("candidate set exhausted: {0}")]
    Exhausted(String),
    #[error("invalid parameters: {0}")]
    Params(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
