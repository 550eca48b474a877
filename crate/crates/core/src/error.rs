use thiserror::Error;

use crate::parse::ParseError;
use crate::poly::Arity;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: Arity, right: Arity },

    #[error("expected a {expected} polynomial, got a {found} one")]
    WrongArity { expected: Arity, found: Arity },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("expected a form of degree {expected}, got degree {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("degree must be at least 3, got {0}")]
    DegreeTooSmall(u32),

    #[error("invalid one-parameter subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("limit does not exist: {monomial} has positive weight {weight} (not in M_<=0)")]
    LimitDoesNotExist { monomial: String, weight: i64 },

    #[error("substitution needs {expected} images, got {found}")]
    SubstitutionArity { expected: usize, found: usize },

    #[error("type xi of degree {degree} takes {expected} coefficients, got {found}")]
    CoefficientCount {
        degree: u32,
        expected: usize,
        found: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),
}
