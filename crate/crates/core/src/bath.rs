//! Analytic bath models.
//!
//! A bath is characterized by its bare response (bosonic) or hybridization
//! Green's function (fermionic) `φ̃(ω)`, the one-sided Fourier transform of
//! the bath correlation. For the Drude model the same function serves both
//! statistics. All quantities are in units of the system frequency with
//! `ħ = k_B = 1`.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::statfun::Statistics;

pub type ComplexValue = Complex64;

/// Bare-bath model. Only the Drude form `φ̃(ω) = iηγ/(ω + iγ)` is built in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathModel {
    Drude { eta: f64, gamma: f64 },
}

impl BathModel {
    pub fn drude(eta: f64, gamma: f64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(invalid("eta", format!("coupling strength must be finite and >= 0, got {eta}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid("gamma", format!("cutoff rate must be finite and > 0, got {gamma}")));
        }
        Ok(Self::Drude { eta, gamma })
    }

    /// True when the bath does not couple at all (`φ̃ ≡ 0`).
    pub fn is_decoupled(&self) -> bool {
        match *self {
            Self::Drude { eta, .. } => eta == 0.0,
        }
    }

    /// `φ̃(z)` at an arbitrary point of the closed upper half-plane.
    pub fn response_at(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::Drude { eta, gamma } => Complex64::new(0.0, eta * gamma) / (z + Complex64::new(0.0, gamma)),
        }
    }

    /// `φ̃(ω)` on the real frequency axis.
    pub fn response(&self, omega: f64) -> ComplexValue {
        match *self {
            Self::Drude { eta, gamma } => {
                let d = omega * omega + gamma * gamma;
                Complex64::new(eta * gamma * gamma / d, eta * gamma * omega / d)
            }
        }
    }

    /// `φ̃(iϖ)` on the positive Laplace axis.
    pub fn response_laplace(&self, varpi: f64) -> ComplexValue {
        match *self {
            Self::Drude { eta, gamma } => Complex64::new(eta * gamma / (varpi + gamma), 0.0),
        }
    }

    /// Zero-frequency coupling `η₀ = φ̃(0)`.
    pub fn coupling_eta0(&self) -> f64 {
        match *self {
            Self::Drude { eta, .. } => eta,
        }
    }

    /// `lim ϖ φ̃(iϖ)` as `ϖ → ∞`; fixes the power-law tails of the spectra.
    pub fn laplace_tail_weight(&self) -> f64 {
        match *self {
            Self::Drude { eta, gamma } => eta * gamma,
        }
    }

    /// Scalar bath spectral density `J(ω)`.
    ///
    /// Bosonic: `½[φ̃(ω) − φ̃(−ω)]`, which is purely imaginary for a real
    /// response function; its imaginary part is returned (odd in `ω`).
    /// Fermionic: `Re g̃(ω)`.
    pub fn spectral_density(&self, omega: f64, statistics: Statistics) -> f64 {
        match statistics {
            Statistics::Bose => 0.5 * (self.response(omega) - self.response(-omega)).im,
            Statistics::Fermi => self.response(omega).re,
        }
    }
}
