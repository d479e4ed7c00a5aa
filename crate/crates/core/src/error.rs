use thiserror::Error;

/// Errors raised by the spectral, quadrature and thermodynamic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("Bose occupation is singular at omega = 0")]
    BoseAtZero,

    #[error("Matsubara grid needs at least one frequency (got {0})")]
    InvalidCount(usize),

    #[error("unstable oscillator: omega_s^2 - omega_s*eta0 must be > 0 (omega_s = {omega_s}, eta0 = {eta0})")]
    Unstable { omega_s: f64, eta0: f64 },

    #[error("free-energy spectral density is discontinuous at |omega| = {0}; use the one-sided limits")]
    AtDiscontinuity(f64),

    #[error("propagator has a pole on the real axis at omega = {0}")]
    PoleOnAxis(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("frequency grid is not symmetric about zero")]
    AsymmetricGrid,

    #[error("lambda-quadrature result has imaginary residual {0:e}")]
    NonRealResult(f64),

    #[error("adaptive quadrature did not reach tolerance (estimate {estimate:e}, error {error:e}, {intervals} intervals)")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("Matsubara sum not converged: remainder estimate {remainder:e} after {terms} terms")]
    NotConverged { remainder: f64, terms: usize },

    #[error("operation requires fermionic statistics")]
    WrongStatistics,

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
