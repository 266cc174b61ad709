use thiserror::Error;

/// Errors raised by the engagement models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngageError {
    /// Structured input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The collision-course geometry admits no intercept.
    #[error("no intercept solution: {0}")]
    NoInterceptSolution(String),

    /// The configuration is outside what the closed forms cover.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// A required piece of configuration is missing or inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// Not enough observations to form an estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The request would exceed a resource guard.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Frequency outside the tabulated radar bands.
    #[error("frequency {0} GHz is outside the tabulated radar bands")]
    OutOfBand(f64),
}

pub type Result<T> = std::result::Result<T, EngageError>;

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(EngageError::Domain(format!("{name} must be a probability in [0, 1], got {p}")))
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(EngageError::Domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

pub(crate) fn check_nonnegative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(EngageError::Domain(format!("{name} must be finite and >= 0, got {v}")))
    }
}
