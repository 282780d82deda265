use thiserror::Error;

/// Errors raised while building or solving a quantization problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("x = {x} lies outside the usable table range [{min}, {max}]")]
    OutsideTable { x: f64, min: f64, max: f64 },

    #[error("cutting function is not strictly positive and finite at x = {x} (value {value})")]
    NonPositiveCutting { x: f64, value: f64 },

    #[error("potential is not finite at x = {x}")]
    NonFinitePotential { x: f64 },

    #[error("effective potential is unconfined: {0}")]
    Unconfined(String),

    #[error("requested {requested} levels but the matrix has order {order}")]
    TooManyLevels { requested: usize, order: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("level list is empty")]
    EmptyLevels,

    #[error("only {available} distinct levels are resolvable from the given 1D levels, {requested} requested")]
    InsufficientLevels { requested: usize, available: usize },

    #[error("tabulated functions are one-dimensional, got D = {0}")]
    TableDimension(usize),

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("reading table: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive and finite, got {value}"),
        })
    }
}
