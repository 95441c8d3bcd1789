use thiserror::Error;

/// Errors produced by the walk engine.
#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not unitary (max |M\u{2020}M - I| = {deviation:.3e})")]
    NonUnitaryOperator { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("degenerate step distribution: all weights vanish (q = {q})")]
    DegenerateDistribution { q: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("too few points for fit: {found} usable points in window, need at least 3")]
    TooFewPoints { found: usize },

    #[error("undefined normalization: t must be >= 1")]
    UndefinedNormalization,

    #[error("lattice too small: amplitude reached |x| = {bound} at step {step}")]
    LatticeTooSmall { bound: i64, step: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, WalkError>;
