use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a structural requirement (wrong counts, a
    /// denominator at a pole, non-finite input).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The argument or parameters lie outside the region where the requested
    /// representation is valid.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("result out of range: {0}")]
    OutOfRange(String),

    #[error("no convergence after {order} terms: {detail}")]
    NoConvergence { order: usize, detail: String },

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
}

impl Error {
    /// True for failures caused by the input rather than the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidParameter(_) | Error::Domain(_) | Error::Pole(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
