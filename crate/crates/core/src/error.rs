use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Cartan type {0}")]
    InvalidType(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{0:?} is not a root")]
    NotARoot(Vec<i64>),

    #[error("vector is not a coweight: pairing with {0:?} is not an integer")]
    NotACoweight(Vec<i64>),

    #[error("lattice is not contained in the ambient lattice")]
    NotASublattice,

    #[error("braid generator {index} out of range for a tuple of length {len}")]
    BraidIndexOutOfRange { index: i32, len: usize },

    #[error("tuple has length {actual}, expected {expected}")]
    WrongTupleLength { expected: usize, actual: usize },

    #[error("tuple does not factor the target element")]
    NotAFactorization,

    #[error("tuple lacks the repeated-root tail pattern")]
    MissingRepeatedTail,

    #[error("element is not quasi-Coxeter: {0}")]
    NotQuasiCoxeter(String),

    #[error("no reflection factorization found up to length {0}")]
    LengthCeilingExceeded(usize),

    #[error("search limits exhausted: {0}")]
    LimitsExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
