use thiserror::Error;

/// Errors produced by the game, operator, spectral and dynamics routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("strategy has zero total mass; mean competitive ability is undefined")]
    ZeroMass,

    #[error("invalid grid order {0}: at least one interval is required")]
    InvalidOrder(usize),

    #[error("matrix size {size} exceeds the exact-arithmetic budget of {max}")]
    ExactArithmeticBudget { size: usize, max: usize },

    #[error("kernel is undefined on the diagonal x = y = {0}")]
    OnDiagonal(f64),

    #[error("non-finite state encountered at t = {0}")]
    NonFinite(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
