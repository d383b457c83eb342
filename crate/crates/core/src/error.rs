use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate index {index} out of range for {len} coordinates")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point does not lie on the reduced surface")]
    NotOnSurface,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("work limit exceeded: {0}")]
    WorkLimit(String),
}
