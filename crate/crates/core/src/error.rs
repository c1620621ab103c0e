use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is NaN, infinite, or outside its domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation was called outside its documented operating point.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// A sampling grid is too coarse or too narrow for the requested computation.
    #[error("insufficient resolution: {0}")]
    Resolution(String),

    /// An integration window truncates a non-negligible part of the integrand.
    #[error("integration window too small: {0}")]
    Window(String),

    /// A requested axis does not exist in the map's coordinate system.
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    /// A search over a parameter range found no admissible value.
    #[error("not found: {0}")]
    NotFound(String),

    /// A feature expected in a data set (dip, tooth) was not detected.
    #[error("feature not detected: {0}")]
    FeatureNotFound(String),

    /// Malformed serialized data.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite<T: num_traits::Float>(value: T, what: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} must be finite")))
    }
}
