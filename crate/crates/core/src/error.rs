use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,

    #[error("pole at t = {point}")]
    Pole { point: String },

    #[error("need moments up to index {needed}, only {available} available")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("generalized Hermite H({m},{n}) has a nonzero coefficient at x^{power}, off its parity ladder")]
    ParityViolation { m: usize, n: usize, power: usize },

    #[error("PIV check undefined for gamma=0 (alpha_n vanishes identically)")]
    PivUndefined,

    #[error("gamma must be >= 0, got {0}")]
    NegativeGamma(String),

    #[error("beta_{n} lost positivity: working precision exhausted")]
    PrecisionExhausted { n: usize },

    #[error("|alpha_{n}(t)| is too small at t = {t}; pick a probe point away from t = 0")]
    ProbeTooCloseToZero { n: usize, t: String },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}
