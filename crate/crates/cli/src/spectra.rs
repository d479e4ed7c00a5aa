//! `spectra`: response functions and free-energy spectra on the real
//! frequency grid, with the jump of `φ` bracketed by two explicit rows.

use std::path::Path;

use impurity_thermo_core::{ComplexValue, Side, Statistics};
use rayon::prelude::*;

use crate::config::{Provider, RunConfig};
use crate::format::{self, num};
use crate::{numerics, CliError};

/// A sample frequency; `jump` marks the rows bracketing `|ω| = ω_S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub omega: f64,
    pub jump: Option<Side>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub omega: f64,
    pub ss: ComplexValue,
    pub sb: ComplexValue,
    pub varphi: f64,
    pub vartheta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub statistics: Statistics,
    pub rows: Vec<SpectrumRow>,
    /// `max |φ(ω) + φ(−ω)|` recomputed at the mirrored points.
    pub varphi_parity: f64,
    /// `max |ϑ(ω) − ϑ(−ω)|` recomputed at the mirrored points.
    pub vartheta_parity: f64,
}

/// Grid points with `|ω|` inside `ω_S(1 ± ε)` replaced by the four jump rows.
pub fn sample_points(cfg: &RunConfig, omega_s: f64) -> Vec<SamplePoint> {
    let g = &cfg.grids.omega;
    let eps = cfg.spectra.jump_epsilon * omega_s;
    let step = (g.max - g.min) / (g.points - 1) as f64;
    let mut points: Vec<SamplePoint> = (0..g.points)
        .map(|i| if i + 1 == g.points { g.max } else { g.min + step * i as f64 })
        .filter(|w| (w.abs() - omega_s).abs() > eps)
        .map(|omega| SamplePoint { omega, jump: None })
        .collect();
    for (offset, side) in [(-eps, Side::Below), (eps, Side::Above)] {
        for sign in [-1.0, 1.0] {
            let omega = sign * (omega_s + offset);
            if (g.min..=g.max).contains(&omega) {
                points.push(SamplePoint { omega, jump: Some(side) });
            }
        }
    }
    points.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    points
}

fn varphi_at(p: &Provider, omega: f64, jump: Option<Side>) -> Result<f64, CliError> {
    let sp = p.spectral();
    match jump.and_then(|side| sp.varphi_sided(side)) {
        Some(v) => Ok(omega.signum() * v),
        None => sp.varphi(omega).map_err(numerics("varphi")),
    }
}

fn responses(p: &Provider, omega: f64) -> Result<(ComplexValue, ComplexValue), CliError> {
    match p {
        Provider::Bose(b) => Ok((
            b.chi_ss(omega).map_err(numerics("chi_ss"))?,
            b.chi_sb(omega, 1.0).map_err(numerics("chi_sb"))?,
        )),
        Provider::Fermi(f) => f.x_functions(omega).map_err(numerics("x_functions")),
    }
}

pub fn compute(p: &Provider, cfg: &RunConfig) -> Result<Spectrum, CliError> {
    let sp = p.spectral();
    let points = sample_points(cfg, p.omega_s());
    let rows = points
        .par_iter()
        .map(|pt| {
            let (ss, sb) = responses(p, pt.omega)?;
            Ok(SpectrumRow {
                omega: pt.omega,
                ss,
                sb,
                varphi: varphi_at(p, pt.omega, pt.jump)?,
                vartheta: sp.vartheta(pt.omega.abs()),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut varphi_parity = 0.0f64;
    let mut vartheta_parity = 0.0f64;
    for (pt, row) in points.iter().zip(&rows) {
        let mirrored = varphi_at(p, -pt.omega, pt.jump)?;
        varphi_parity = varphi_parity.max((row.varphi + mirrored).abs());
        vartheta_parity = vartheta_parity.max((sp.vartheta(pt.omega) - sp.vartheta(-pt.omega)).abs());
    }
    Ok(Spectrum {
        statistics: p.statistics(),
        rows,
        varphi_parity,
        vartheta_parity,
    })
}

pub fn render(spectra: &[Spectrum], cfg: &RunConfig) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str("# impurity-thermo spectra\n");
    out.push_str("# units: frequencies in omega_s; hbar = k_B = 1\n");
    out.push_str(&format!(
        "# bath: drude eta = {}, gamma = {}; bose omega_s = {}; fermi epsilon_s = {}\n",
        num(cfg.bath.eta),
        num(cfg.bath.gamma),
        num(cfg.system.omega_s),
        num(cfg.system.epsilon_s)
    ));
    out.push_str("# bose columns: ss = chi_SS, sb = chi_SB; fermi columns: ss = X_SS, sb = X_SB\n");
    out.push_str("# vartheta is evaluated at varpi = |omega|\n");
    out.push_str(&format!(
        "# rows at +-omega_s*(1 -+ {}) carry the one-sided limits of varphi\n",
        num(cfg.spectra.jump_epsilon)
    ));
    out.push_str("statistics,omega,re_ss,im_ss,re_sb,im_sb,varphi,vartheta\n");
    for s in spectra {
        for r in &s.rows {
            out.push_str(&format::row(
                "spectra",
                s.statistics.name(),
                &[r.omega, r.ss.re, r.ss.im, r.sb.re, r.sb.im, r.varphi, r.vartheta],
            )?);
        }
    }
    for s in spectra {
        out.push_str(&format!(
            "# parity {}: max|varphi(w)+varphi(-w)| = {}, max|vartheta(w)-vartheta(-w)| = {}\n",
            s.statistics.name(),
            num(s.varphi_parity),
            num(s.vartheta_parity)
        ));
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let spectra = cfg
        .statistics
        .list()
        .into_iter()
        .map(|stat| compute(&cfg.provider(stat)?, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    format::write(out_dir, "spectra.csv", &render(&spectra, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn jump_rows_bracket_omega_s() {
        let cfg = RunConfig::default();
        let pts = sample_points(&cfg, 1.0);
        assert!(pts.windows(2).all(|w| w[0].omega < w[1].omega));
        let jumps: Vec<_> = pts.iter().filter(|p| p.jump.is_some()).collect();
        assert_eq!(jumps.len(), 4);
        assert!(pts.iter().all(|p| p.jump.is_some() || (p.omega.abs() - 1.0).abs() > 1e-9));
        // 2401 points, ±1 removed, four jump rows added
        assert_eq!(pts.len(), 2403);
    }

    #[test]
    fn default_spectra_parities_and_jump() {
        let cfg = RunConfig::default();
        for stat in [Statistics::Bose, Statistics::Fermi] {
            let s = compute(&cfg.provider(stat).unwrap(), &cfg).unwrap();
            assert!(s.varphi_parity < 1e-12 && s.vartheta_parity < 1e-12);
            let below = s.rows.iter().find(|r| r.omega == 1.0 - 1e-9).unwrap();
            let above = s.rows.iter().find(|r| r.omega == 1.0 + 1e-9).unwrap();
            assert!((below.varphi - above.varphi - FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_coupling_spectra_vanish() {
        let cfg = RunConfig::from_toml("[bath]\neta = 0.0\n").unwrap();
        for stat in [Statistics::Bose, Statistics::Fermi] {
            let s = compute(&cfg.provider(stat).unwrap(), &cfg).unwrap();
            for r in &s.rows {
                assert_eq!((r.sb.re, r.sb.im, r.varphi, r.vartheta), (0.0, 0.0, 0.0, 0.0));
            }
        }
    }

    #[test]
    fn render_is_well_formed() {
        let cfg = RunConfig::from_toml("[grids.omega]\npoints = 5\n").unwrap();
        let s = compute(&cfg.provider(Statistics::Bose).unwrap(), &cfg).unwrap();
        let text = render(&[s], &cfg).unwrap();
        let data: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], "statistics,omega,re_ss,im_ss,re_sb,im_sb,varphi,vartheta");
        assert!(data[1..].iter().all(|l| l.split(',').count() == 8 && l.starts_with("bose,")));
        assert!(text.lines().last().unwrap().starts_with("# parity bose"));
        assert!(!text.contains('\r'));
    }
}
