use thiserror::Error;

/// Errors raised by the series engine and the germ computations built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("series has no invertible constant term")]
    NonUnit,
    #[error("composition requires substituted series without constant term")]
    IllFormedComposition,
    #[error("not divisible: remainder term x^{xk}*y^{yk} is nonzero")]
    NotDivisible { xk: usize, yk: usize },
    #[error("series is not reversible (x-valuation {valuation:?}, expected 1)")]
    NotReversible { valuation: Option<usize> },
    #[error("diffeomorphism is not tangent to the identity")]
    NotUnipotent,
    #[error("vector field is not nilpotent (component valuation below 2)")]
    NotNilpotent,
    #[error("invalid germ data: {0}")]
    InvalidSpec(String),
    #[error("lambda-degree of f[{j},{k}] is {degree}, exceeding {j}+{k}")]
    DegreeBoundViolated { j: usize, k: usize, degree: usize },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant breached: {0}")]
    InvariantBreach(String),
}

pub type Result<T, E = GermError> = std::result::Result<T, E>;
