//! Bosonic Brownian oscillator: a harmonic mode `q̂_S` of frequency `ω_S`
//! coupled linearly to a Gaussian bath.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::bath::{BathModel, ComplexValue};
use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_half_line, QuadConfig};
use crate::statfun::Statistics;
use crate::thermo::{PowerLaw, Side, SpectralProvider};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonicBO {
    omega_s: f64,
    bath: BathModel,
}

impl BosonicBO {
    /// Builds the oscillator, rejecting unstable couplings
    /// (`ω_S² − ω_S η₀ ≤ 0`, i.e. `η ≥ ω_S` for Drude).
    pub fn new(omega_s: f64, bath: BathModel) -> Result<Self> {
        if !(omega_s.is_finite() && omega_s > 0.0) {
            return Err(invalid("omega_s", format!("oscillator frequency must be > 0, got {omega_s}")));
        }
        let eta0 = bath.coupling_eta0();
        if omega_s * omega_s - omega_s * eta0 <= 0.0 {
            return Err(Error::Unstable { omega_s, eta0 });
        }
        Ok(Self { omega_s, bath })
    }

    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    pub fn bath(&self) -> &BathModel {
        &self.bath
    }

    /// Local susceptibility at coupling `λ²`: `ω_S/(ω_S² − ω² − λ²ω_S φ̃(ω))`.
    pub fn chi_ss_coupled(&self, omega: f64, lambda2: f64) -> Result<ComplexValue> {
        let ws = self.omega_s;
        let den = Complex64::from(ws * ws - omega * omega) - lambda2 * ws * self.bath.response(omega);
        if den == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleOnAxis(omega));
        }
        let v = ws / den;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("chi_ss"))
        }
    }

    /// Local susceptibility `χ̃_SS(ω)` of the fully coupled oscillator.
    pub fn chi_ss(&self, omega: f64) -> Result<ComplexValue> {
        self.chi_ss_coupled(omega, 1.0)
    }

    /// `χ̃_SS(iϖ; λ)` on the Laplace axis.
    pub fn chi_ss_laplace(&self, varpi: f64, lambda2: f64) -> ComplexValue {
        let ws = self.omega_s;
        ws / (Complex64::from(ws * ws + varpi * varpi) - lambda2 * ws * self.bath.response_laplace(varpi))
    }

    /// Nonlocal system–bath response at coupling `λ²`:
    /// `−λ²ω_S φ̃(ω)/(ω_S² − ω² − λ²ω_S φ̃(ω))`.
    pub fn chi_sb(&self, omega: f64, lambda2: f64) -> Result<ComplexValue> {
        check_lambda2(lambda2)?;
        if lambda2 == 0.0 || self.bath.is_decoupled() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let chi = self.chi_ss_coupled(omega, lambda2)?;
        Ok(-lambda2 * self.bath.response(omega) * chi)
    }

    /// Free-energy spectral density `φ(ω)`, odd in `ω`.
    ///
    /// Half the principal argument of
    /// `(ω_S² − ω²)/(ω_S² − ω² − ω_S φ̃(ω))`; undefined exactly at `|ω| = ω_S`
    /// where the function jumps by `π/2`.
    pub fn varphi(&self, omega: f64) -> Result<f64> {
        if self.bath.is_decoupled() || omega == 0.0 {
            return Ok(0.0);
        }
        let w = omega.abs();
        if w == self.omega_s {
            return Err(Error::AtDiscontinuity(self.omega_s));
        }
        let ws = self.omega_s;
        let gap = Complex64::from(ws * ws - w * w);
        let ratio = gap / (gap - ws * self.bath.response(w));
        Ok(omega.signum() * 0.5 * ratio.arg())
    }

    /// One-sided limits of `φ` at `ω = ω_S ∓ 0⁺`.
    pub fn varphi_sided(&self, side: Side) -> f64 {
        if self.bath.is_decoupled() {
            return 0.0;
        }
        let above = -0.5 * self.bath.response(self.omega_s).arg();
        match side {
            Side::Below => above + FRAC_PI_2,
            Side::Above => above,
        }
    }

    /// Thermodynamic spectrum
    /// `ϑ(ϖ) = ½ ln|(ω_S² + ϖ²)/(ω_S² + ϖ² − ω_S φ̃(iϖ))|`, even in `ϖ`.
    pub fn vartheta(&self, varpi: f64) -> f64 {
        let v = varpi.abs();
        let ws = self.omega_s;
        // ϑ = −½ ln|1 − z| with z = ω_S φ̃(iϖ)/(ω_S² + ϖ²)
        let z = ws * self.bath.response_laplace(v) / (ws * ws + v * v);
        -0.25 * (-2.0 * z.re + z.norm_sqr()).ln_1p()
    }
}

/// Static system–bath response two ways: directly, and as
/// `(2/π)∫_0^∞ Im χ̃_SB(ω)/ω dω` from its dissipative part.
pub fn kramers_kronig_static(bo: &BosonicBO) -> Result<(f64, f64)> {
    let direct = bo.chi_sb(0.0, 1.0)?.re;
    let f = |w: f64| bo.chi_sb(w, 1.0).map_or(f64::NAN, |c| c.im / w);
    let ws = bo.omega_s();
    let integral = integrate_half_line(f, &[0.0, ws, 2.0 * ws], QuadConfig::default())?;
    Ok((direct, 2.0 / PI * integral.value))
}

pub(crate) fn check_lambda2(lambda2: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda2) {
        Ok(())
    } else {
        Err(invalid("lambda2", format!("coupling fraction must lie in [0, 1], got {lambda2}")))
    }
}

impl SpectralProvider for BosonicBO {
    fn statistics(&self) -> Statistics {
        Statistics::Bose
    }

    fn varphi(&self, omega: f64) -> Result<f64> {
        BosonicBO::varphi(self, omega)
    }

    fn varphi_sided(&self, side: Side) -> Option<f64> {
        self.jump_location().map(|_| BosonicBO::varphi_sided(self, side))
    }

    fn vartheta(&self, varpi: f64) -> f64 {
        BosonicBO::vartheta(self, varpi)
    }

    fn jump_location(&self) -> Option<f64> {
        (!self.bath.is_decoupled()).then_some(self.omega_s)
    }

    fn vartheta_tail(&self) -> Option<PowerLaw> {
        Some(PowerLaw {
            exponent: 3.0,
            coefficient: 0.5 * self.omega_s * self.bath.laplace_tail_weight(),
        })
    }

    fn scale(&self) -> f64 {
        match *self.bath() {
            BathModel::Drude { gamma, .. } => self.omega_s.max(gamma),
        }
    }
}
