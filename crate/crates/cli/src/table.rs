//! `thermo`: free energy, internal energy and entropy over the temperature
//! grid, with the integral route and the high-temperature form alongside.

use std::path::Path;

use impurity_thermo_core::thermo::{a_by_integral, high_t_asymptotics, thermo_point_with};
use impurity_thermo_core::Statistics;
use rayon::prelude::*;

use crate::config::{Provider, RunConfig};
use crate::format::{self, num};
use crate::{numerics, CliError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoRow {
    pub t: f64,
    pub a: f64,
    pub u: f64,
    pub s: f64,
    pub a_integral: f64,
    pub a_high_t: f64,
    /// `A − (U − T S)`.
    pub residual: f64,
}

pub fn compute(p: &Provider, cfg: &RunConfig) -> Result<Vec<ThermoRow>, CliError> {
    let sp = p.spectral();
    cfg.grids
        .temperature
        .values()
        .par_iter()
        .map(|&t| {
            let pt = thermo_point_with(sp, t, &cfg.sum.config(sp, t)).map_err(numerics("thermo_point"))?;
            Ok(ThermoRow {
                t,
                a: pt.a,
                u: pt.u,
                s: pt.s,
                a_integral: a_by_integral(sp, t).map_err(numerics("a_by_integral"))?,
                a_high_t: high_t_asymptotics(sp, t).a,
                residual: pt.a - (pt.u - t * pt.s),
            })
        })
        .collect()
}

pub fn render(tables: &[(Statistics, Vec<ThermoRow>)], cfg: &RunConfig) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str("# impurity-thermo thermo\n");
    out.push_str("# units: T, A, U in omega_s; S in k_B\n");
    out.push_str(&format!(
        "# bath: drude eta = {}, gamma = {}; bose omega_s = {}; fermi epsilon_s = {}\n",
        num(cfg.bath.eta),
        num(cfg.bath.gamma),
        num(cfg.system.omega_s),
        num(cfg.system.epsilon_s)
    ));
    out.push_str("# A, U, S from the Matsubara route; residual = A - (U - T*S)\n");
    out.push_str("statistics,T,A,U,S,A_integral_route,A_highT_approx,residual\n");
    for (stat, rows) in tables {
        for r in rows {
            out.push_str(&format::row(
                "thermo",
                stat.name(),
                &[r.t, r.a, r.u, r.s, r.a_integral, r.a_high_t, r.residual],
            )?);
        }
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let tables = cfg
        .statistics
        .list()
        .into_iter()
        .map(|stat| Ok((stat, compute(&cfg.provider(stat)?, cfg)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    format::write(out_dir, "thermo.csv", &render(&tables, cfg)?)
}
