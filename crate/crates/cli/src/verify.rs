//! `verify`: the invariant suite, reported as JSON.

use std::f64::consts::FRAC_PI_2;

use impurity_thermo_core::bosonic::kramers_kronig_static;
use impurity_thermo_core::entangle::{
    chi_sb_trace, gsb_trace, vartheta_by_lambda_quadrature, FrequencyGrid, LambdaFamily, LambdaGrid, MatrixFn,
};
use impurity_thermo_core::thermo::{
    a_by_integral, entropy_with, equal_area_check, extrapolate_to_zero, jump_height, matsubara_sum,
    thermo_point_with, zero_temperature_free_energy,
};
use impurity_thermo_core::{SpectralProvider, Statistics};
use serde::Serialize;

use crate::config::{Provider, RunConfig};
use crate::{spectra, CliError};

/// Temperatures at which the two free-energy routes are compared.
pub const ROUTE_TEMPERATURES: [f64; 7] = [0.05, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0];
pub const HIGH_T: f64 = 100.0;
pub const ZERO_T_ANCHOR: f64 = 0.02;
pub const LAMBDA_NODES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub overall: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

type Measured = Result<f64, String>;

fn at_most(stat: Statistics, name: &str, measured: Measured, tolerance: f64) -> Check {
    judge(stat, name, measured, tolerance, |m, tol| m <= tol)
}

fn judge(stat: Statistics, name: &str, measured: Measured, tolerance: f64, ok: impl Fn(f64, f64) -> bool) -> Check {
    let name = format!("{}.{name}", stat.name());
    match measured {
        Ok(m) => Check {
            name,
            pass: m.is_finite() && ok(m, tolerance),
            measured: m.is_finite().then_some(m),
            tolerance,
            detail: None,
        },
        Err(e) => Check {
            name,
            pass: false,
            measured: None,
            tolerance,
            detail: Some(e),
        },
    }
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn route_equivalence(sp: &dyn SpectralProvider, cfg: &RunConfig) -> Measured {
    let mut worst = 0.0f64;
    for t in ROUTE_TEMPERATURES {
        let m = matsubara_sum(sp, t, &cfg.sum.config(sp, t)).map_err(text)?.value;
        let i = a_by_integral(sp, t).map_err(text)?;
        worst = worst.max((m - i).abs() / m.abs().max(1.0));
    }
    Ok(worst)
}

fn largest_free_energy(sp: &dyn SpectralProvider, cfg: &RunConfig) -> Measured {
    let mut top = f64::NEG_INFINITY;
    for t in ROUTE_TEMPERATURES {
        top = top.max(matsubara_sum(sp, t, &cfg.sum.config(sp, t)).map_err(text)?.value);
    }
    Ok(top)
}

fn identity(sp: &dyn SpectralProvider, cfg: &RunConfig) -> Measured {
    let mut worst = 0.0f64;
    for t in ROUTE_TEMPERATURES {
        let p = thermo_point_with(sp, t, &cfg.sum.config(sp, t)).map_err(text)?;
        worst = worst.max((p.a - (p.u - p.t * p.s)).abs() / p.a.abs().max(1.0));
    }
    Ok(worst)
}

fn third_law(sp: &dyn SpectralProvider, cfg: &RunConfig) -> Measured {
    let t = cfg.tolerances.third_law_temperature;
    Ok(entropy_with(sp, t, &cfg.sum.config(sp, t)).map_err(text)?.abs())
}

fn high_t(sp: &dyn SpectralProvider, cfg: &RunConfig) -> Measured {
    let p = thermo_point_with(sp, HIGH_T, &cfg.sum.config(sp, HIGH_T)).map_err(text)?;
    Ok(match sp.statistics() {
        Statistics::Bose => {
            let v0 = sp.vartheta(0.0);
            if v0 == 0.0 {
                (p.a / HIGH_T).abs().max(p.s.abs())
            } else {
                ((p.a / HIGH_T + v0) / v0).abs().max(((p.s - v0) / v0).abs())
            }
        }
        Statistics::Fermi => p.a.abs().max(p.u.abs()).max(p.s.abs()),
    })
}

fn jump_error(p: &Provider) -> f64 {
    match jump_height(p.spectral()) {
        Some(h) => (h - FRAC_PI_2).abs(),
        None => 0.0,
    }
}

/// Pointwise distance between the trace theorems on scalar samples and the
/// closed-form nonlocal functions.
fn trace_oracle(p: &Provider, cfg: &RunConfig) -> Measured {
    let points: Vec<f64> = spectra::sample_points(cfg, p.omega_s()).iter().map(|s| s.omega).collect();
    let grid = FrequencyGrid::new(points).map_err(text)?;
    let mut worst = 0.0f64;
    match p {
        Provider::Bose(b) => {
            let phi = MatrixFn::from_scalar(grid.clone(), |w| b.bath().response(w));
            let chi = MatrixFn::from_fn(grid.clone(), 1, |w, _, _| b.chi_ss(w).unwrap_or(f64::NAN.into())).map_err(text)?;
            for (w, t) in grid.points().iter().zip(chi_sb_trace(&phi, &chi).map_err(text)?) {
                worst = worst.max((t - b.chi_sb(*w, 1.0).map_err(text)?).norm());
            }
        }
        Provider::Fermi(f) => {
            let g = MatrixFn::from_scalar(grid.clone(), |w| f.bath().response(w));
            let gss = MatrixFn::from_fn(grid.clone(), 1, |w, _, _| f.g_ss(w).unwrap_or(f64::NAN.into())).map_err(text)?;
            for (w, t) in grid.points().iter().zip(gsb_trace(&g, &gss).map_err(text)?) {
                worst = worst.max((t - f.g_sb(*w, 1.0).map_err(text)?).norm());
            }
        }
    }
    Ok(worst)
}

/// `ϑ` rebuilt by `λ²` quadrature against the closed form on the Laplace grid.
fn lambda_quadrature(p: &Provider, cfg: &RunConfig) -> Measured {
    let grid = FrequencyGrid::linear(0.0, cfg.grids.varpi.max, cfg.grids.varpi.points).map_err(text)?;
    let lg = LambdaGrid::gauss_legendre(LAMBDA_NODES).map_err(text)?;
    let sp = p.spectral();
    let (bath, family) = match p {
        Provider::Bose(b) => (
            MatrixFn::from_scalar(grid.clone(), |v| b.bath().response_laplace(v)),
            LambdaFamily::sample(&lg, |l| MatrixFn::from_scalar(grid.clone(), |v| b.chi_ss_laplace(v, l))),
        ),
        Provider::Fermi(f) => (
            MatrixFn::from_scalar(grid.clone(), |v| f.bath().response_laplace(v)),
            LambdaFamily::sample(&lg, |l| MatrixFn::from_scalar(grid.clone(), |v| f.g_ss_laplace(v, l))),
        ),
    };
    let got = vartheta_by_lambda_quadrature(sp.statistics(), &bath, &family, &lg).map_err(text)?;
    Ok(grid
        .points()
        .iter()
        .zip(got)
        .map(|(v, x)| (x - sp.vartheta(*v)).abs())
        .fold(0.0, f64::max))
}

fn checks_for(p: &Provider, cfg: &RunConfig) -> Vec<Check> {
    let sp = p.spectral();
    let stat = sp.statistics();
    let tol = &cfg.tolerances;
    let mut out = vec![
        at_most(stat, "route_equivalence", route_equivalence(sp, cfg), tol.route_equiv),
        at_most(
            stat,
            "equal_area",
            equal_area_check(sp, 2.0 * sp.scale()).map(|e| e.relative_difference).map_err(text),
            tol.equal_area,
        ),
        at_most(
            stat,
            "zero_temperature",
            zero_temperature_free_energy(sp)
                .and_then(|a0| Ok((a0 - extrapolate_to_zero(sp, ZERO_T_ANCHOR)?).abs()))
                .map_err(text),
            tol.zero_temperature,
        ),
        at_most(stat, "third_law", third_law(sp, cfg), tol.third_law),
        at_most(
            stat,
            "high_t",
            high_t(sp, cfg),
            match stat {
                Statistics::Bose => tol.high_t_relative,
                Statistics::Fermi => tol.high_t_absolute,
            },
        ),
        judge(stat, "spontaneity", largest_free_energy(sp, cfg), 0.0, |m, tol| m < tol),
    ];
    out.push(match p {
        Provider::Bose(b) => at_most(
            stat,
            "kramers_kronig",
            kramers_kronig_static(b).map(|(d, k)| (d - k).abs()).map_err(text),
            tol.kramers_kronig,
        ),
        Provider::Fermi(f) => at_most(
            stat,
            "sb_density_zero_integral",
            f.sb_density_integral().map(f64::abs).map_err(text),
            tol.zero_integral,
        ),
    });
    out.push(at_most(stat, "generic_vs_closed_form", trace_oracle(p, cfg), tol.trace_oracle));
    out.push(at_most(stat, "lambda_quadrature", lambda_quadrature(p, cfg), tol.lambda_quadrature));
    out.push(at_most(stat, "jump", Ok(jump_error(p)), tol.jump));
    out.push(at_most(
        stat,
        "parity",
        spectra::compute(p, cfg)
            .map(|s| s.varphi_parity.max(s.vartheta_parity))
            .map_err(text),
        tol.parity,
    ));
    out.push(at_most(stat, "identity", identity(sp, cfg), tol.identity));
    out
}

pub fn run(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    let mut checks = Vec::new();
    for stat in cfg.statistics.list() {
        checks.extend(checks_for(&cfg.provider(stat)?, cfg));
    }
    Ok(VerificationReport {
        overall: checks.iter().all(|c| c.pass),
        checks,
    })
}
