use thiserror::Error;

/// Errors raised by the numerical and arithmetic routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaassError {
    #[error("{v} is not invertible modulo {c}")]
    NotInvertible { v: i64, c: u64 },
    #[error("epsilon is undefined for even argument {0}")]
    EvenArgument(i64),
    #[error("{0} is not of the form 0 or 3 mod 4 (or is negative)")]
    NotADiscriminant(i64),
    #[error("parameter b = {0} is a non-positive integer")]
    PoleAtB(f64),
    #[error("parameter b = {0} is an integer, two-term formula undefined")]
    IntegerB(f64),
    #[error("argument must be positive, got {0}")]
    NonPositiveX(f64),
    #[error("{0}")]
    Unsupported(String),
    #[error("function has a pole at {0}")]
    Pole(f64),
    #[error("index m = {m} is not in the plus-space class for weight 2k = {twice_k}")]
    PlusSpaceViolation { m: i64, twice_k: i32 },
    #[error("4 is not invertible modulo N' = {0}")]
    FourNotInvertible(u64),
    #[error("series for n = {n} not converged: estimate {error_estimate:e} after c = {c_used}")]
    NotConverged {
        n: i64,
        c_used: u64,
        error_estimate: f64,
    },
    #[error("s = {s} is a pole for the pair (m, n) = ({m}, {n}), residue is finite")]
    PoleAtS { m: i64, n: i64, s: f64 },
    #[error("(m, n) = ({m}, {n}) is not a pole pair")]
    NotAPolePair { m: i64, n: i64 },
    #[error("finite difference step {0} too small for the cancellation observed")]
    StepTooSmall(f64),
    #[error("weight 2k = {0} outside the supported range")]
    UnsupportedWeightRange(i32),
    #[error("tail bound {bound:e} too large at y = {y}")]
    TailTooLarge { y: f64, bound: f64 },
    #[error("index {index} not allowed for this basis")]
    IndexClass { index: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, MaassError>;
