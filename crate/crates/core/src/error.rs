use num_complex::Complex64;

/// Errors raised by the library surface.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive integrator ran out of subdivisions. The best estimate is
    /// kept so callers can decide whether it is good enough.
    #[error("quadrature did not converge: estimate {estimate}, error estimate {error:e}")]
    Convergence { estimate: Complex64, error: f64 },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("unsupported band profile: {0}")]
    UnsupportedProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
