//! Occupation factors, Matsubara grids and high-temperature approximants of
//! the Fermi function.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Particle statistics of the hybridization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl Statistics {
    /// `δ = 1` for bosons, `0` for fermions.
    pub fn delta(self) -> u32 {
        match self {
            Self::Bose => 1,
            Self::Fermi => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Bose => "bose",
            Self::Fermi => "fermi",
        }
    }

    /// n-th Matsubara frequency `(2n − 1 + δ)π/β`, `n ≥ 1`.
    pub fn matsubara(self, n: usize, beta: f64) -> f64 {
        (2.0 * n as f64 - 1.0 + f64::from(self.delta())) * PI / beta
    }

    /// Bose `1/(1 − e^{−βω})` or Fermi `1/(1 + e^{βω})`.
    ///
    /// Only exponentials of non-positive arguments are formed, so the result
    /// stays finite for any `|βω|`.
    pub fn occupation(self, beta: f64, omega: f64) -> Result<f64> {
        check_beta(beta)?;
        let x = beta * omega;
        match self {
            Self::Fermi => Ok(if x >= 0.0 {
                let e = (-x).exp();
                e / (1.0 + e)
            } else {
                1.0 / (1.0 + x.exp())
            }),
            Self::Bose => {
                if x == 0.0 {
                    return Err(Error::BoseAtZero);
                }
                Ok(if x > 0.0 {
                    -1.0 / (-x).exp_m1()
                } else {
                    // 1/(1 − e^{−x}) = e^{x}/(e^{x} − 1)
                    x.exp() / x.exp_m1()
                })
            }
        }
    }

    /// `n(ω) − n(−ω)`: `coth(βω/2)` for bosons, `−tanh(βω/2)` for fermions.
    ///
    /// This is the weight of an odd spectral density folded onto `ω > 0`.
    /// The bosonic value diverges at `ω = 0`.
    pub fn odd_weight(self, beta: f64, omega: f64) -> f64 {
        let t = (0.5 * beta * omega).tanh();
        match self {
            Self::Bose => 1.0 / t,
            Self::Fermi => -t,
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bose" | "boson" | "bosonic" => Ok(Self::Bose),
            "fermi" | "fermion" | "fermionic" => Ok(Self::Fermi),
            other => Err(format!("unknown statistics `{other}` (expected bose or fermi)")),
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(invalid("beta", format!("inverse temperature must be finite and > 0, got {beta}")))
    }
}

/// Matsubara frequencies `ϖ_1 … ϖ_count` at inverse temperature `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatsubaraGrid {
    pub statistics: Statistics,
    pub beta: f64,
    pub frequencies: Vec<f64>,
}

impl MatsubaraGrid {
    pub fn new(statistics: Statistics, beta: f64, count: usize) -> Result<Self> {
        check_beta(beta)?;
        if count < 1 {
            return Err(Error::InvalidCount(count));
        }
        let frequencies = (1..=count).map(|n| statistics.matsubara(n, beta)).collect();
        Ok(Self {
            statistics,
            beta,
            frequencies,
        })
    }

    pub fn count(&self) -> usize {
        self.frequencies.len()
    }
}

/// Pole weight and pole position (in units of `1/β`) of the Padé [0/1]
/// approximant: `½ − κ_a (ω/β)/(ω² + (ξ_a/β)²)`.
pub const PADE_KAPPA: f64 = 3.0;
pub const PADE_XI: f64 = 3.464_101_615_137_754_6; // √12

/// Pole weight `π²/4` of the single lowest-Matsubara-pole approximant.
pub const LOWEST_MATSUBARA_KAPPA: f64 = PI * PI / 4.0;

/// Padé [0/1] approximant of the Fermi function; error `O((βω)^5)`.
pub fn fermi_pade01(beta: f64, omega: f64) -> f64 {
    let pole = PADE_XI / beta;
    0.5 - PADE_KAPPA * (omega / beta) / (omega * omega + pole * pole)
}

/// Lowest-Matsubara-pole approximant of the Fermi function; error `O((βω)^3)`.
pub fn fermi_lowest_matsubara(beta: f64, omega: f64) -> f64 {
    let pole = PI / beta;
    0.5 - LOWEST_MATSUBARA_KAPPA * (omega / beta) / (omega * omega + pole * pole)
}

/// Least-squares slope of `ln|error|` against `ln x`.
pub fn log_log_slope(xs: &[f64], errors: &[f64]) -> f64 {
    assert_eq!(xs.len(), errors.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = errors.iter().map(|e| e.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `count` log-spaced points on `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn fermi_limits() {
        let f = Statistics::Fermi;
        assert_eq!(f.occupation(1.0, 0.0).unwrap(), 0.5);
        assert_eq!(f.occupation(1.0, 800.0).unwrap(), 0.0);
        assert_eq!(f.occupation(1.0, -800.0).unwrap(), 1.0);
        assert!(f.occupation(1.0, 700.0).unwrap() > 0.0);
    }

    #[test]
    fn bose_values() {
        let b = Statistics::Bose;
        assert_abs_diff_eq!(b.occupation(1.0, 2f64.ln()).unwrap(), 2.0, epsilon = 1e-14);
        assert_eq!(b.occupation(1.0, 0.0), Err(Error::BoseAtZero));
        assert_eq!(b.occupation(1.0, 750.0).unwrap(), 1.0);
        assert_eq!(b.occupation(1.0, -750.0).unwrap(), 0.0);
        assert!(b.occupation(0.0, 1.0).is_err());
    }

    #[test]
    fn approximant_values() {
        assert_eq!(fermi_pade01(1.0, 0.0), 0.5);
        assert_eq!(fermi_lowest_matsubara(2.0, 0.0), 0.5);
        assert_abs_diff_eq!(fermi_pade01(1.0, 1.0), 0.5 - 3.0 / 13.0, epsilon = 1e-15);
        let exact = Statistics::Fermi.occupation(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(exact, 0.268_941_421_369_995_1, epsilon = 1e-15);
        assert_abs_diff_eq!(fermi_pade01(1.0, 1.0) - exact, 2.89e-4, epsilon = 1e-6);
        let lm = 0.5 - (PI * PI / 4.0) / (1.0 + PI * PI);
        assert_abs_diff_eq!(fermi_lowest_matsubara(1.0, 1.0), lm, epsilon = 1e-15);
        assert_abs_diff_eq!(lm, 0.273_00, epsilon = 1e-5);
    }

    #[test]
    fn lowest_matsubara_error_order() {
        // The O(x^3) error is resolvable in f64; the Padé O(x^5) one is
        // measured in the high-precision acceptance suite.
        let xs = log_space(1e-3, 1e-1, 25);
        let errs: Vec<f64> = xs
            .iter()
            .map(|&x| fermi_lowest_matsubara(1.0, x) - Statistics::Fermi.occupation(1.0, x).unwrap())
            .collect();
        let slope = log_log_slope(&xs, &errs);
        assert!((slope - 3.0).abs() < 0.2, "slope {slope}");
    }

    #[test]
    fn grids() {
        let g = MatsubaraGrid::new(Statistics::Fermi, 1.0, 3).unwrap();
        assert_eq!(g.frequencies, vec![PI, 3.0 * PI, 5.0 * PI]);
        let g = MatsubaraGrid::new(Statistics::Bose, 2.0, 2).unwrap();
        assert_eq!(g.frequencies, vec![PI, 2.0 * PI]);
        assert_eq!(MatsubaraGrid::new(Statistics::Bose, 1.0, 0), Err(Error::InvalidCount(0)));
    }

    #[test]
    fn parse_statistics() {
        assert_eq!("Bose".parse::<Statistics>().unwrap(), Statistics::Bose);
        assert_eq!("fermi".parse::<Statistics>().unwrap(), Statistics::Fermi);
        assert!("anyon".parse::<Statistics>().is_err());
    }

    proptest! {
        #[test]
        fn fermi_complement(beta in 0.01f64..100.0, omega in -50.0f64..50.0) {
            let f = Statistics::Fermi;
            let s = f.occupation(beta, omega).unwrap() + f.occupation(beta, -omega).unwrap();
            prop_assert!((s - 1.0).abs() <= 2.0 * f64::EPSILON);
        }

        #[test]
        fn bose_complement(beta in 0.01f64..100.0, omega in 1e-3f64..50.0) {
            let b = Statistics::Bose;
            let up = b.occupation(beta, omega).unwrap();
            let down = b.occupation(beta, -omega).unwrap();
            prop_assert!((up + down - 1.0).abs() <= 1e-12 * up.abs().max(1.0));
            let w = b.odd_weight(beta, omega);
            prop_assert!((up - down - w).abs() <= 1e-12 * w.abs().max(1.0));
        }

        #[test]
        fn approximants_are_odd_about_half(beta in 0.01f64..100.0, omega in -50.0f64..50.0) {
            prop_assert!((fermi_pade01(beta, -omega) - (1.0 - fermi_pade01(beta, omega))).abs() < 1e-15);
            prop_assert!((fermi_lowest_matsubara(beta, -omega) - (1.0 - fermi_lowest_matsubara(beta, omega))).abs() < 1e-15);
        }

        #[test]
        fn matsubara_spacing(beta in 0.01f64..100.0, n in 1usize..1000) {
            for s in [Statistics::Bose, Statistics::Fermi] {
                let d = s.matsubara(n + 1, beta) - s.matsubara(n, beta);
                prop_assert!((d - 2.0 * PI / beta).abs() <= 1e-9 * (2.0 * PI / beta) * n as f64);
            }
        }
    }
}
