use thiserror::Error;

/// Errors raised by the spectral, operator and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("{name} {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{op} cannot be applied to a {found} field")]
    ArityMismatch { op: &'static str, found: &'static str },

    #[error("radius {radius} exceeds the box half-width pi*L = {limit}")]
    OutsideBox { radius: f64, limit: f64 },

    #[error("region {inner} <= |x| <= {outer} contains no grid points")]
    EmptyRegion { inner: f64, outer: f64 },

    #[error("velocity is not solenoidal: relative divergence {0:e}")]
    NotSolenoidal(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("Hermitian symmetry violated: relative defect {0:e}")]
    NotHermitian(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
