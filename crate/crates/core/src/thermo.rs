//! Hybridization thermodynamics from the free-energy spectra `φ(ω)` and
//! `ϑ(ϖ)`: free energy by the real-frequency integral and by Matsubara
//! summation, entropy, internal energy and high-temperature asymptotics.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate, integrate_to_infinity, Integral, QuadConfig};
use crate::special::hurwitz_zeta;
use crate::statfun::{Statistics, LOWEST_MATSUBARA_KAPPA, PADE_KAPPA, PADE_XI};

/// Side of the jump of `φ` at `ω_S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// `ϑ(ϖ) ≈ coefficient · ϖ^{−exponent}` for large `ϖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub exponent: f64,
    pub coefficient: f64,
}

/// Source of the two free-energy spectra of a hybridized impurity.
pub trait SpectralProvider: Sync {
    fn statistics(&self) -> Statistics;

    /// `φ(ω)`, odd; fails exactly at the jump.
    fn varphi(&self, omega: f64) -> Result<f64>;

    /// One-sided limits at the jump, if there is one.
    fn varphi_sided(&self, side: Side) -> Option<f64>;

    /// `ϑ(ϖ)`, even.
    fn vartheta(&self, varpi: f64) -> f64;

    /// Positive frequency at which `φ` jumps.
    fn jump_location(&self) -> Option<f64>;

    fn vartheta_tail(&self) -> Option<PowerLaw> {
        None
    }

    /// Largest intrinsic frequency; sets panel widths and the Matsubara cutoff.
    fn scale(&self) -> f64 {
        1.0
    }
}

/// `φ(ω_S − 0⁺) − φ(ω_S + 0⁺)`.
pub fn jump_height(sp: &dyn SpectralProvider) -> Option<f64> {
    Some(sp.varphi_sided(Side::Below)? - sp.varphi_sided(Side::Above)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    None,
    PowerLaw(PowerLaw),
}

/// Truncation of the Matsubara series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumConfig {
    pub n_terms: usize,
    pub tail: Tail,
}

/// Highest summed Matsubara frequency, per unit of [`SpectralProvider::scale`].
pub const CUTOFF_PER_SCALE: f64 = 2.5e4;

/// Largest accepted remainder estimate of a Matsubara sum.
pub const SUM_TOLERANCE: f64 = 1e-9;

impl SumConfig {
    /// At least 200 terms, and enough that the last frequency reaches
    /// `CUTOFF_PER_SCALE · scale`; the provider's tail law is attached.
    pub fn auto(sp: &dyn SpectralProvider, t: f64) -> Self {
        let beta = 1.0 / t;
        let cutoff = CUTOFF_PER_SCALE * sp.scale();
        let needed = (beta * cutoff / (2.0 * PI)).ceil();
        let n_terms = if needed.is_finite() { (needed as usize).max(200) } else { 200 };
        Self {
            n_terms,
            tail: sp.vartheta_tail().map_or(Tail::None, Tail::PowerLaw),
        }
    }
}

/// Truncated Matsubara sum with its estimated remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSum {
    pub value: f64,
    pub remainder: f64,
    pub terms: usize,
}

fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(invalid("temperature", format!("must be finite and > 0, got {t}")))
    }
}

/// Free energy by Matsubara summation, without enforcing convergence.
///
/// Bose: `−ϑ(0)/β − (2/β) Σ ϑ(2πn/β)`. Fermi: `(2/β) Σ ϑ((2n−1)π/β)`.
/// A power-law tail is summed in closed form with the Hurwitz zeta function.
pub fn matsubara_sum(sp: &dyn SpectralProvider, t: f64, cfg: &SumConfig) -> Result<MatsubaraSum> {
    check_temperature(t)?;
    if cfg.n_terms < 1 {
        return Err(Error::InvalidCount(cfg.n_terms));
    }
    let stat = sp.statistics();
    let beta = 1.0 / t;
    let n = cfg.n_terms;
    // Smallest terms first.
    let mut series = 0.0;
    for k in (1..=n).rev() {
        series += sp.vartheta(stat.matsubara(k, beta));
    }
    let last = stat.matsubara(n, beta);
    let last_value = sp.vartheta(last);
    let (tail, remainder) = match cfg.tail {
        Tail::None => (0.0, 2.0 / beta * last_value.abs() * last * beta / (2.0 * PI)),
        Tail::PowerLaw(law) => {
            let shift = match stat {
                Statistics::Bose => n as f64 + 1.0,
                Statistics::Fermi => n as f64 + 0.5,
            };
            let tail = law.coefficient * (beta / (2.0 * PI)).powf(law.exponent) * hurwitz_zeta(law.exponent, shift)?;
            let deviation = (last_value - law.coefficient * last.powf(-law.exponent)).abs();
            (tail, deviation * last / (law.exponent * PI))
        }
    };
    let total = series + tail;
    let value = match stat {
        Statistics::Bose => -sp.vartheta(0.0) / beta - 2.0 / beta * total,
        Statistics::Fermi => 2.0 / beta * total,
    };
    if !value.is_finite() {
        return Err(Error::NonFinite("matsubara_sum"));
    }
    Ok(MatsubaraSum {
        value,
        remainder,
        terms: n,
    })
}

/// Free energy by Matsubara summation; fails if the remainder estimate
/// exceeds [`SUM_TOLERANCE`].
pub fn a_by_matsubara(sp: &dyn SpectralProvider, t: f64, cfg: &SumConfig) -> Result<f64> {
    let s = matsubara_sum(sp, t, cfg)?;
    if s.remainder > SUM_TOLERANCE {
        return Err(Error::NotConverged {
            remainder: s.remainder,
            terms: s.terms,
        });
    }
    Ok(s.value)
}

fn integration_config() -> QuadConfig {
    QuadConfig::with_tolerances(1e-14, 1e-10)
}

/// Panel boundaries on `[0, ∞)`: the last one starts the mapped tail.
fn panels(sp: &dyn SpectralProvider) -> Vec<f64> {
    let scale = sp.scale();
    match sp.jump_location() {
        Some(j) => vec![0.0, j, j + scale],
        None => vec![0.0, scale],
    }
}

/// `∫_0^∞ f` over the provider's panels, sampled strictly inside each panel.
fn integrate_panels(sp: &dyn SpectralProvider, mut f: impl FnMut(f64) -> f64) -> Result<Integral> {
    let cfg = integration_config();
    let breaks = panels(sp);
    let mut out = Integral {
        value: 0.0,
        error: 0.0,
        intervals: 0,
    };
    for w in breaks.windows(2) {
        let part = integrate(&mut f, w[0], w[1], cfg)?;
        out.value += part.value;
        out.error += part.error;
        out.intervals += part.intervals;
    }
    let tail = integrate_to_infinity(&mut f, *breaks.last().expect("non-empty"), cfg)?;
    out.value += tail.value;
    out.error += tail.error;
    out.intervals += tail.intervals;
    Ok(out)
}

/// Free energy `−(1/π)∫ φ(ω) n(ω) dω`, folded onto `ω > 0` as
/// `−(1/π)∫_0^∞ φ(ω) [n(ω) − n(−ω)] dω`.
pub fn a_by_integral(sp: &dyn SpectralProvider, t: f64) -> Result<f64> {
    check_temperature(t)?;
    let stat = sp.statistics();
    let beta = 1.0 / t;
    let integral = integrate_panels(sp, |w| match sp.varphi(w) {
        Ok(v) => v * stat.odd_weight(beta, w),
        Err(_) => f64::NAN,
    })?;
    Ok(-integral.value / PI)
}

fn entropy_step(t: f64) -> f64 {
    (1e-3 * t).max(1e-6)
}

/// `S = −∂A/∂T` by central differences of the Matsubara route at steps `h`
/// and `h/2`, Richardson-combined. One truncation serves the whole stencil.
pub fn entropy(sp: &dyn SpectralProvider, t: f64) -> Result<f64> {
    check_temperature(t)?;
    let cfg = SumConfig::auto(sp, t - entropy_step(t));
    entropy_with(sp, t, &cfg)
}

/// [`entropy`] with a caller-chosen truncation.
pub fn entropy_with(sp: &dyn SpectralProvider, t: f64, cfg: &SumConfig) -> Result<f64> {
    check_temperature(t)?;
    let h = entropy_step(t);
    if t - h <= 0.0 {
        return Err(invalid("temperature", format!("too small for the entropy stencil: {t}")));
    }
    let a = |x: f64| a_by_matsubara(sp, x, cfg);
    let wide = (a(t + h)? - a(t - h)?) / (2.0 * h);
    let narrow = (a(t + 0.5 * h)? - a(t - 0.5 * h)?) / h;
    Ok(-(4.0 * narrow - wide) / 3.0)
}

/// `U = A + T S`.
pub fn internal_energy(sp: &dyn SpectralProvider, t: f64) -> Result<f64> {
    Ok(thermo_point(sp, t)?.u)
}

/// Free energy, internal energy and entropy at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub t: f64,
    pub a: f64,
    pub u: f64,
    pub s: f64,
}

pub fn thermo_point(sp: &dyn SpectralProvider, t: f64) -> Result<ThermoPoint> {
    check_temperature(t)?;
    let a = a_by_matsubara(sp, t, &SumConfig::auto(sp, t))?;
    let s = entropy(sp, t)?;
    Ok(ThermoPoint { t, a, u: a + t * s, s })
}

/// [`thermo_point`] with one caller-chosen truncation for `A` and `S`.
pub fn thermo_point_with(sp: &dyn SpectralProvider, t: f64, cfg: &SumConfig) -> Result<ThermoPoint> {
    let a = a_by_matsubara(sp, t, cfg)?;
    let s = entropy_with(sp, t, cfg)?;
    Ok(ThermoPoint { t, a, u: a + t * s, s })
}

/// [`thermo_point`] over a temperature grid, in parallel; output order
/// follows the input.
pub fn thermo_sweep(sp: &dyn SpectralProvider, temperatures: &[f64]) -> Result<Vec<ThermoPoint>> {
    temperatures.par_iter().map(|&t| thermo_point(sp, t)).collect()
}

/// Areas under the two spectra on the half line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualArea {
    pub varphi_area: f64,
    pub vartheta_area: f64,
    pub relative_difference: f64,
}

/// `∫_0^∞ φ` against `∫_0^∞ ϑ`; panels are split at the jump and at
/// `cutoff`, beyond which both integrals run over the mapped tail.
pub fn equal_area_check(sp: &dyn SpectralProvider, cutoff: f64) -> Result<EqualArea> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(invalid("cutoff", format!("must be finite and > 0, got {cutoff}")));
    }
    let cfg = integration_config();
    let mut breaks = vec![0.0];
    if let Some(j) = sp.jump_location().filter(|&j| j < cutoff) {
        breaks.push(j);
    }
    breaks.push(cutoff);

    let mut varphi_area = 0.0;
    let mut vartheta_area = 0.0;
    let phi = |w: f64| sp.varphi(w).unwrap_or(f64::NAN);
    let theta = |w: f64| sp.vartheta(w);
    for w in breaks.windows(2) {
        varphi_area += integrate(phi, w[0], w[1], cfg)?.value;
    }
    varphi_area += integrate_to_infinity(phi, cutoff, cfg)?.value;
    for w in [0.0, cutoff].windows(2) {
        vartheta_area += integrate(theta, w[0], w[1], cfg)?.value;
    }
    vartheta_area += integrate_to_infinity(theta, cutoff, cfg)?.value;

    let scale = varphi_area.abs().max(vartheta_area.abs());
    let relative_difference = if scale == 0.0 {
        0.0
    } else {
        (varphi_area - vartheta_area).abs() / scale
    };
    Ok(EqualArea {
        varphi_area,
        vartheta_area,
        relative_difference,
    })
}

/// `A(T = 0)` from the area under `ϑ`: `−(1/π)∫ϑ` for bosons, `+(1/π)∫ϑ`
/// for fermions.
pub fn zero_temperature_free_energy(sp: &dyn SpectralProvider) -> Result<f64> {
    let area = equal_area_check(sp, 2.0 * sp.scale())?.vartheta_area;
    Ok(match sp.statistics() {
        Statistics::Bose => -area / PI,
        Statistics::Fermi => area / PI,
    })
}

/// Quadratic extrapolation of the Matsubara route to `T = 0` from `T₀` and `2T₀`.
pub fn extrapolate_to_zero(sp: &dyn SpectralProvider, t0: f64) -> Result<f64> {
    let a = |t: f64| a_by_matsubara(sp, t, &SumConfig::auto(sp, t));
    Ok((4.0 * a(t0)? - a(2.0 * t0)?) / 3.0)
}

/// High-temperature approximations of the thermodynamic functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTApprox {
    pub a: f64,
    pub u: f64,
    pub s: f64,
}

/// Leading high-temperature forms for temperature-independent spectra.
///
/// Bose: `A ≈ −Tϑ(0)`, `S ≈ ϑ(0)`, `U ≈ 0`. Fermi: the Padé [0/1] pole
/// `ϖ_a = ξ_a T` with weight `κ_a` gives `A ≈ (κ_a/ξ_a)ϖ_aϑ(ϖ_a)`,
/// `U ≈ −(κ_a/ξ_a)ϖ_a²ϑ′(ϖ_a)` and `S = (U − A)/T`.
pub fn high_t_asymptotics(sp: &dyn SpectralProvider, t: f64) -> HighTApprox {
    match sp.statistics() {
        Statistics::Bose => {
            let v0 = sp.vartheta(0.0);
            HighTApprox {
                a: -t * v0,
                u: 0.0,
                s: v0,
            }
        }
        Statistics::Fermi => {
            let pole = PADE_XI * t;
            let ratio = PADE_KAPPA / PADE_XI;
            let h = 1e-4 * pole.max(1.0);
            let slope = (sp.vartheta(pole + h) - sp.vartheta(pole - h)) / (2.0 * h);
            let a = ratio * pole * sp.vartheta(pole);
            let u = -ratio * pole * pole * slope;
            HighTApprox { a, u, s: (u - a) / t }
        }
    }
}

/// Single-pole estimate `(κ/β)ϑ(π/β)` with `κ = π²/4`.
pub fn kappa_lowest_matsubara_a(sp: &dyn SpectralProvider, t: f64) -> Result<f64> {
    if sp.statistics() != Statistics::Fermi {
        return Err(Error::WrongStatistics);
    }
    check_temperature(t)?;
    Ok(LOWEST_MATSUBARA_KAPPA * t * sp.vartheta(PI * t))
}
