use thiserror::Error;

/// Failures reported by the rate computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),
    /// Adaptive quadrature could not reach its tolerance, or the integrand
    /// produced a non-finite value.
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    /// A covariance matrix violates the uncertainty principle beyond the
    /// numerical slack.
    #[error("unphysical state: {0}")]
    Unphysical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Quadrature(_) | Error::Unphysical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
