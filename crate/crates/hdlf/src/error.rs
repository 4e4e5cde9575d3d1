use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("truncation box exhausted: {0}")]
    BoxExhausted(String),
    #[error("incompatible truncation boxes: {0}")]
    BoxMismatch(String),
    #[error("series is zero")]
    ZeroSeries,
    #[error("not a p-th power: {0}")]
    NotAPthPower(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("datum has no term with nonzero last exponent")]
    EmptySecondSet,
    #[error("no close root: {0}")]
    NoCloseRoot(String),
    #[error("exponential argument does not converge: {0}")]
    DivergentExponent(String),
    #[error("ring has no element pi_1 with pi_1^(p-1) = -p")]
    RingLacksPi1,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
