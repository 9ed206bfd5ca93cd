use thiserror::Error;

pub type Result<T> = std::result::Result<T, TgdError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TgdError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("support half-width must be positive, got {0}")]
    NonPositiveSupport(f64),
    #[error("unsupported moment order {0}; expected 0, 1 or 2")]
    UnsupportedMoment(u32),
    #[error("kernel violates constraints: {0}")]
    ConstraintViolation(String),
    #[error("kernel size N={0} is too small")]
    DegenerateSize(usize),
    #[error("direct sampling needs N >= 3, got {0}")]
    SampleTooCoarse(usize),
    #[error("signal of length {len} is too short for a stencil of length {needed}")]
    SignalTooShort { len: usize, needed: usize },
    #[error("empty signal")]
    EmptySignal,
    #[error("unsupported dimensionality {0}")]
    UnsupportedDims(usize),
    #[error("operator has {op} dims but field has {field}")]
    DimsMismatch { op: usize, field: usize },
    #[error("field axis {axis} has length {len}, valid mode needs at least {needed}")]
    FieldTooSmall { axis: usize, len: usize, needed: usize },
    #[error("operator has no separable factors")]
    NotSeparable,
    #[error("invalid field: {0}")]
    InvalidField(String),
}
