use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("n must be a power of two ≥ 16 (got {0})")]
    InvalidResolution(usize),

    #[error("box length must be positive and finite (got {0})")]
    InvalidBoxLength(f64),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dyadic block index {q} outside [{min}, {max}]")]
    BlockOutOfRange { q: i32, min: i32, max: i32 },

    #[error("velocity field is not divergence-free (residual {residual:e} > {tolerance:e})")]
    NotDivergenceFree { residual: f64, tolerance: f64 },

    #[error("CFL violation at t = {t}: dt = {dt:e} exceeds limit {limit:e}")]
    Cfl { t: f64, dt: f64, limit: f64 },

    #[error("non-finite value in `{field}` at t = {t}")]
    NonFinite { field: &'static str, t: f64 },

    #[error("logarithm argument {argument} ≤ 1 in formula {formula}")]
    LogDomain { formula: &'static str, argument: f64 },

    #[error("unknown estimate `{0}`")]
    UnknownEstimate(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("malformed snapshot: {0}")]
    Snapshot(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Whether the error comes from the numerical integration (as opposed to bad input).
    pub fn is_numerical_abort(&self) -> bool {
        matches!(self, Error::Cfl { .. } | Error::NonFinite { .. })
    }
}
