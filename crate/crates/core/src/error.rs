use thiserror::Error;

/// Errors raised by the algebraic and numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("component count mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("{0} is undefined for the zero polynomial")]
    ZeroPolynomial(&'static str),

    #[error("term is not divisible")]
    NotDivisible,

    #[error("syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),

    #[error("invalid space parameters: {0}")]
    InvalidSpace(String),

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generator {index} is zero")]
    ZeroGenerator { index: usize },

    #[error("generators {first} and {second} share a leading monomial; reduce the set first")]
    DuplicateLeadingTerm { first: usize, second: usize },

    #[error("generator {index} is not quasi-homogeneous for the given weights")]
    NotQuasiHomogeneous { index: usize },

    #[error("generators have unequal weighted degrees ({0:?})")]
    UnequalDegrees(Vec<u64>),

    #[error("weighted degree {target} is unreachable from generator {index} of degree {degree}")]
    UnreachableDegree { index: usize, degree: u64, target: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
