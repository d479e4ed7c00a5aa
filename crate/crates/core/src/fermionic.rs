//! Fermionic Brownian oscillator: a spinless level at energy `ε_S`
//! hybridized with a noninteracting fermionic bath.

use num_complex::Complex64;

use crate::bath::{BathModel, ComplexValue};
use crate::bosonic::check_lambda2;
use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_half_line, QuadConfig};
use crate::statfun::Statistics;
use crate::thermo::{PowerLaw, Side, SpectralProvider};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionicBO {
    epsilon_s: f64,
    bath: BathModel,
}

impl FermionicBO {
    /// A zero level energy puts the jump of `φ` at `ω = 0` and is rejected.
    pub fn new(epsilon_s: f64, bath: BathModel) -> Result<Self> {
        if !(epsilon_s.is_finite() && epsilon_s != 0.0) {
            return Err(invalid("epsilon_s", format!("level energy must be finite and nonzero, got {epsilon_s}")));
        }
        Ok(Self { epsilon_s, bath })
    }

    pub fn epsilon_s(&self) -> f64 {
        self.epsilon_s
    }

    /// Location `|ε_S|` of the jump in `φ`.
    pub fn omega_s(&self) -> f64 {
        self.epsilon_s.abs()
    }

    pub fn bath(&self) -> &BathModel {
        &self.bath
    }

    fn detuning(&self, omega: f64, lambda2: f64) -> Complex64 {
        Complex64::from(omega - self.epsilon_s) + I * lambda2 * self.bath.response(omega)
    }

    /// Local Green's function at coupling `λ²`: `i/(ω − ε_S + iλ²g̃(ω))`.
    pub fn g_ss_coupled(&self, omega: f64, lambda2: f64) -> Result<ComplexValue> {
        let den = self.detuning(omega, lambda2);
        if den == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleOnAxis(omega));
        }
        Ok(I / den)
    }

    pub fn g_ss(&self, omega: f64) -> Result<ComplexValue> {
        self.g_ss_coupled(omega, 1.0)
    }

    /// `G̃_SS(iϖ; λ)` on the Laplace axis.
    pub fn g_ss_laplace(&self, varpi: f64, lambda2: f64) -> ComplexValue {
        I / (Complex64::new(-self.epsilon_s, varpi) + I * lambda2 * self.bath.response_laplace(varpi))
    }

    /// System–bath Green's function `2λ²g̃(ω)/(ω − ε_S + iλ²g̃(ω))`.
    pub fn g_sb(&self, omega: f64, lambda2: f64) -> Result<ComplexValue> {
        check_lambda2(lambda2)?;
        if lambda2 == 0.0 || self.bath.is_decoupled() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let den = self.detuning(omega, lambda2);
        if den == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleOnAxis(omega));
        }
        Ok(2.0 * lambda2 * self.bath.response(omega) / den)
    }

    /// Spectral density `Re G̃_SB(ω)`; integrates to zero over the real line.
    pub fn sb_spectral_density(&self, omega: f64) -> Result<f64> {
        Ok(self.g_sb(omega, 1.0)?.re)
    }

    /// Odd part `½[𝒥_SB(ω) − 𝒥_SB(−ω)]`.
    pub fn sb_spectral_density_odd(&self, omega: f64) -> Result<f64> {
        Ok(0.5 * (self.sb_spectral_density(omega)? - self.sb_spectral_density(-omega)?))
    }

    /// `∫ 𝒥_SB(ω) dω` over the real line; zero for any bath.
    pub fn sb_density_integral(&self) -> Result<f64> {
        let even = |w: f64| match (self.sb_spectral_density(w), self.sb_spectral_density(-w)) {
            (Ok(a), Ok(b)) => a + b,
            _ => f64::NAN,
        };
        let ws = self.omega_s();
        let scale = match self.bath {
            BathModel::Drude { gamma, .. } => ws.max(gamma),
        };
        Ok(integrate_half_line(even, &[0.0, ws, ws + scale], QuadConfig::default())?.value)
    }

    /// Free-energy spectral density, odd in `ω`.
    ///
    /// For `ω > 0` this is half the principal argument of
    /// `(1 − g̃G̃_SS)(ω)/(1 − g̃G̃_SS)(−ω)`, using
    /// `1 − g̃G̃_SS = (ω − ε_S)/(ω − ε_S + ig̃)`.
    pub fn varphi(&self, omega: f64) -> Result<f64> {
        if self.bath.is_decoupled() || omega == 0.0 {
            return Ok(0.0);
        }
        let w = omega.abs();
        if w == self.omega_s() {
            return Err(Error::AtDiscontinuity(self.omega_s()));
        }
        let e = self.epsilon_s;
        let num = (w - e) * self.detuning(-w, 1.0);
        let den = self.detuning(w, 1.0) * (-w - e);
        Ok(omega.signum() * 0.5 * (num / den).arg())
    }

    /// One-sided limits of `φ` at `ω = ω_S ∓ 0⁺`.
    ///
    /// The factor vanishing at `ω_S` is divided out, leaving a finite ratio
    /// `R`; the side fixes the sign it is multiplied by.
    pub fn varphi_sided(&self, side: Side) -> f64 {
        if self.bath.is_decoupled() {
            return 0.0;
        }
        let ws = self.omega_s();
        let g_up = self.bath.response(ws);
        let g_down = self.bath.response(-ws);
        let (ratio, flip_below) = if self.epsilon_s < 0.0 {
            // (ω − ε)(−ω − ε + ig̃(−ω)) / [(ω − ε + ig̃(ω))(ω_S − ω)]
            (2.0 * ws * I * g_down / (2.0 * ws + I * g_up), false)
        } else {
            // (ω − ω_S)(−ω − ε + ig̃(−ω)) / [ig̃(ω)(−ω − ε)]
            ((-2.0 * ws + I * g_down) / (-2.0 * ws * I * g_up), true)
        };
        let flip = match side {
            Side::Below => flip_below,
            Side::Above => !flip_below,
        };
        0.5 * if flip { (-ratio).arg() } else { ratio.arg() }
    }

    /// `ϑ(ϖ) = ln|(iϖ − ε_S)/(iϖ − ε_S + ig̃(iϖ))|`, even in `ϖ`.
    pub fn vartheta(&self, varpi: f64) -> f64 {
        let v = varpi.abs();
        let a = self.bath.response_laplace(v).re;
        let e2 = self.epsilon_s * self.epsilon_s;
        // ½ ln[(ε² + ϖ²)/(ε² + (ϖ + a)²)]
        -0.5 * (a * (2.0 * v + a) / (e2 + v * v)).ln_1p()
    }

    /// Symmetrized responses `X̃(ω) = (i/2)[G̃(ω) − G̃(−ω)*]` of the local and
    /// system–bath Green's functions.
    ///
    /// `Re X̃` is even and `Im X̃` is odd; `Im X̃_SB` equals the odd part of
    /// `𝒥_SB`.
    pub fn x_functions(&self, omega: f64) -> Result<(ComplexValue, ComplexValue)> {
        let half_i = 0.5 * I;
        let ss = half_i * (self.g_ss(omega)? - self.g_ss(-omega)?.conj());
        let sb = half_i * (self.g_sb(omega, 1.0)? - self.g_sb(-omega, 1.0)?.conj());
        Ok((ss, sb))
    }
}

impl SpectralProvider for FermionicBO {
    fn statistics(&self) -> Statistics {
        Statistics::Fermi
    }

    fn varphi(&self, omega: f64) -> Result<f64> {
        FermionicBO::varphi(self, omega)
    }

    fn varphi_sided(&self, side: Side) -> Option<f64> {
        self.jump_location().map(|_| FermionicBO::varphi_sided(self, side))
    }

    fn vartheta(&self, varpi: f64) -> f64 {
        FermionicBO::vartheta(self, varpi)
    }

    fn jump_location(&self) -> Option<f64> {
        (!self.bath.is_decoupled()).then_some(self.omega_s())
    }

    fn vartheta_tail(&self) -> Option<PowerLaw> {
        Some(PowerLaw {
            exponent: 2.0,
            coefficient: -self.bath.laplace_tail_weight(),
        })
    }

    fn scale(&self) -> f64 {
        match *self.bath() {
            BathModel::Drude { gamma, .. } => self.omega_s().max(gamma),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn reference() -> FermionicBO {
        FermionicBO::new(-1.0, BathModel::drude(0.4, 4.0).unwrap()).unwrap()
    }

    fn flipped() -> FermionicBO {
        FermionicBO::new(1.0, BathModel::drude(0.4, 4.0).unwrap()).unwrap()
    }

    #[test]
    fn green_function_values() {
        let bo = reference();
        let g = bo.g_ss(0.0).unwrap();
        assert_abs_diff_eq!(g.re, 0.4 / 1.16, epsilon = 1e-15);
        assert_abs_diff_eq!(g.im, 1.0 / 1.16, epsilon = 1e-15);
        let sb = bo.g_sb(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(sb.re, 0.8 / 1.16, epsilon = 1e-15);
        assert_abs_diff_eq!(sb.im, -0.32 / 1.16, epsilon = 1e-15);
        assert_eq!(bo.g_sb(0.3, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        assert!(bo.g_sb(0.3, -0.1).is_err());
    }

    #[test]
    fn decoupled_dot() {
        let bo = FermionicBO::new(-1.0, BathModel::drude(0.0, 4.0).unwrap()).unwrap();
        let g = bo.g_ss(0.5).unwrap();
        assert_abs_diff_eq!(g.im, 1.0 / 1.5, epsilon = 1e-15);
        assert_eq!(bo.g_ss(-1.0), Err(Error::PoleOnAxis(-1.0)));
        assert_eq!(bo.varphi(1.0).unwrap(), 0.0);
        assert_eq!(bo.vartheta(0.0), 0.0);
        assert_eq!(bo.jump_location(), None);
        let (xss, _) = bo.x_functions(0.5).unwrap();
        let (xss_m, _) = bo.x_functions(-0.5).unwrap();
        assert_eq!(xss.im, 0.0);
        assert_eq!(xss.re, xss_m.re);
    }

    #[test]
    fn rejects_zero_level() {
        assert!(FermionicBO::new(0.0, BathModel::drude(0.4, 4.0).unwrap()).is_err());
    }

    #[test]
    fn vartheta_values() {
        let bo = reference();
        assert_abs_diff_eq!(bo.vartheta(0.0), -0.5 * 1.16f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(bo.vartheta(0.0), -0.074_211, epsilon = 1e-6);
        let w = 1e4;
        assert!((w * w * bo.vartheta(w) / -1.6 - 1.0).abs() < 1e-3);
        for v in [0.0, 0.05, 0.1] {
            assert!(bo.vartheta(v) <= 0.0);
        }
    }

    #[test]
    fn jump_at_level() {
        for bo in [reference(), flipped()] {
            assert_eq!(bo.varphi(1.0), Err(Error::AtDiscontinuity(1.0)));
            let below = bo.varphi_sided(Side::Below);
            let above = bo.varphi_sided(Side::Above);
            assert_abs_diff_eq!((below - above).abs(), FRAC_PI_2, epsilon = 1e-14);
            assert_abs_diff_eq!(bo.varphi(1.0 - 1e-9).unwrap(), below, epsilon = 1e-7);
            assert_abs_diff_eq!(bo.varphi(1.0 + 1e-9).unwrap(), above, epsilon = 1e-7);
            assert_abs_diff_eq!(crate::thermo::jump_height(&bo).unwrap().abs(), FRAC_PI_2, epsilon = 1e-14);
        }
        let bo = reference();
        assert_abs_diff_eq!(bo.varphi_sided(Side::Below), 0.5654, epsilon = 1e-4);
        assert_abs_diff_eq!(bo.varphi_sided(Side::Above), -1.0054, epsilon = 1e-4);
    }

    #[test]
    fn continuous_away_from_level() {
        let bo = reference();
        let mut prev = bo.varphi(1e-4).unwrap();
        let mut w = 1e-4;
        while w < 20.0 {
            let next = w + 1e-3;
            if (w - 1.0) * (next - 1.0) > 0.0 {
                let v = bo.varphi(next).unwrap();
                assert!((v - prev).abs() < 1e-2, "jump near {w}");
                prev = v;
            } else {
                prev = bo.varphi(next).unwrap();
            }
            w = next;
        }
    }

    #[test]
    fn sb_density_integrates_to_zero() {
        for bo in [reference(), flipped()] {
            let total = bo.sb_density_integral().unwrap();
            assert!(total.abs() < 1e-6, "{total}");
        }
    }

    proptest! {
        #[test]
        fn sb_identity(omega in -30.0f64..30.0) {
            let bo = reference();
            let lhs = bo.g_sb(omega, 1.0).unwrap() + 2.0 * I * bo.bath().response(omega) * bo.g_ss(omega).unwrap();
            prop_assert!(lhs.norm() < 1e-14);
        }

        #[test]
        fn modulus_bound(omega in -30.0f64..30.0) {
            let bo = reference();
            let bound = 1.0 / bo.bath().response(omega).re;
            prop_assert!(bo.g_ss(omega).unwrap().norm() <= bound * (1.0 + 1e-14));
        }

        #[test]
        fn varphi_is_odd(omega in 0.0f64..30.0) {
            prop_assume!(omega != 1.0);
            for bo in [reference(), flipped()] {
                prop_assert_eq!(bo.varphi(-omega).unwrap(), -bo.varphi(omega).unwrap());
            }
        }

        #[test]
        fn vartheta_sign_invariance(varpi in 0.0f64..1e3) {
            prop_assert_eq!(reference().vartheta(varpi), flipped().vartheta(varpi));
            prop_assert_eq!(reference().vartheta(-varpi), reference().vartheta(varpi));
        }

        #[test]
        fn x_function_parity(omega in 0.0f64..30.0) {
            prop_assume!(omega != 1.0);
            let bo = reference();
            let (ss_p, sb_p) = bo.x_functions(omega).unwrap();
            let (ss_m, sb_m) = bo.x_functions(-omega).unwrap();
            for (p, m) in [(ss_p, ss_m), (sb_p, sb_m)] {
                prop_assert!((p.re - m.re).abs() < 1e-12);
                prop_assert!((p.im + m.im).abs() < 1e-12);
            }
            let odd = bo.sb_spectral_density_odd(omega).unwrap();
            prop_assert!((sb_p.im - odd).abs() < 1e-12);
        }
    }
}
