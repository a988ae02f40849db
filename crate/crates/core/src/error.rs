use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("measure has no atom with positive weight")]
    EmptySupport,
    #[error("weight {value} at index {index} is negative")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weight at index {index} is not finite")]
    NonFiniteWeight { index: usize },
    #[error("support point at index {index} duplicates an earlier point")]
    DuplicateSupportPoint { index: usize },
    #[error("support has {points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },
    #[error("model point is empty or has a non-finite coordinate")]
    InvalidModelPoint,
    #[error("non-finite value at support index {index}")]
    NonFiniteValue { index: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dataset is empty or has non-finite entries")]
    InvalidDataset,
    #[error("risk profile has no entry for support atom {index}")]
    SupportMismatch { index: usize },
    #[error("risk {value} at index {index} is negative or non-finite")]
    InvalidRisk { index: usize, value: f64 },
    #[error("regularization factor must be positive and finite, got {0}")]
    NonPositiveLambda(f64),
    #[error("beta {beta} is not above the pole at {pole}")]
    BetaOutOfDomain { beta: f64, pole: f64 },
    #[error("root bracket [{lo}, {hi}] is invalid: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    BracketFailure { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },
    #[error("tolerance {tol} not reached after {iterations} iterations (residual {residual})")]
    ToleranceNotReached { tol: f64, iterations: usize, residual: f64 },
    #[error("log risk argument {value} at index {index} is not positive")]
    NonPositiveArgument { index: usize, value: f64 },
    #[error("outside atom {index} coincides with a support point of the reference")]
    AtomCollision { index: usize },
}

impl Error {
    /// Variant name, stable for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySupport => "EmptySupport",
            Error::NegativeWeight { .. } => "NegativeWeight",
            Error::NonFiniteWeight { .. } => "NonFiniteWeight",
            Error::DuplicateSupportPoint { .. } => "DuplicateSupportPoint",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::InvalidModelPoint => "InvalidModelPoint",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidDataset => "InvalidDataset",
            Error::SupportMismatch { .. } => "SupportMismatch",
            Error::InvalidRisk { .. } => "InvalidRisk",
            Error::NonPositiveLambda(_) => "NonPositiveLambda",
            Error::BetaOutOfDomain { .. } => "BetaOutOfDomain",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::ToleranceNotReached { .. } => "ToleranceNotReached",
            Error::NonPositiveArgument { .. } => "NonPositiveArgument",
            Error::AtomCollision { .. } => "AtomCollision",
        }
    }
}
