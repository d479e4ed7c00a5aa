use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SMALL_GRIDS: &str = "[grids.omega]\npoints = 241\n[grids.temperature]\npoints = 16\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_impurity-thermo"))
}

fn with_config(dir: &Path, toml: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    std::fs::write(&path, toml).unwrap();
    bin().args(args).arg("--config").arg(&path).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn verify_passes_with_relaxed_third_law() {
    let dir = TempDir::new().unwrap();
    let out = with_config(dir.path(), "[tolerances]\nthird_law = 1e-2\n", &["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r["overall"], true);
    assert_eq!(r["checks"].as_array().unwrap().len(), 24);
    for c in r["checks"].as_array().unwrap() {
        assert!(c["name"].is_string() && c["pass"].is_boolean() && c["tolerance"].is_number());
        assert!(c["measured"].is_number());
    }
}

#[test]
fn verify_defaults_fail_only_on_third_law() {
    let out = bin().arg("verify").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["overall"], false);
    let failed: Vec<_> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed, ["bose.third_law", "fermi.third_law"]);
}

#[test]
fn coarse_sum_fails_route_equivalence_with_exit_1() {
    let dir = TempDir::new().unwrap();
    let out = with_config(dir.path(), "[sum]\nn_terms = 2\ntail = \"none\"\n", &["verify", "--stat", "bose"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(check(&r, "bose.route_equivalence")["pass"], false);
}

#[test]
fn unstable_oscillator_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = with_config(dir.path(), "[bath]\neta = 1.5\n", &["verify"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("stability") && err.contains("bath.eta"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = with_config(dir.path(), "[bath]\netta = 0.4\n", &["thermo"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("etta"));

    let out = with_config(dir.path(), "[grids.omega]\npoints = 1\n", &["spectra"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grids.omega.points"));

    let out = bin().args(["thermo", "--config", "/nonexistent/run.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["verify", "--stat", "photon"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().arg("verify").env("IMPURITY_THERMO_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, SMALL_GRIDS).unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["0", "1", "3"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        for cmd in ["spectra", "thermo"] {
            let status = bin()
                .args([cmd, "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .env("IMPURITY_THERMO_THREADS", threads)
                .status()
                .unwrap();
            assert!(status.success());
        }
        outputs.push((
            std::fs::read(out.join("spectra.csv")).unwrap(),
            std::fs::read(out.join("thermo.csv")).unwrap(),
        ));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let (spectra, thermo) = &outputs[0];
    for text in [spectra, thermo] {
        let text = std::str::from_utf8(text).unwrap();
        assert!(!text.contains('\r') && !text.to_lowercase().contains("nan") && !text.contains("inf"));
    }
}

#[test]
fn stat_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, format!("statistics = \"bose\"\n{SMALL_GRIDS}")).unwrap();
    let status = bin()
        .args(["thermo", "--stat", "fermi", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("thermo.csv")).unwrap();
    let rows: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|l| l.starts_with("fermi,")));
}

#[test]
fn thermo_csv_pairs_both_statistics() {
    let dir = TempDir::new().unwrap();
    let out = with_config(dir.path(), SMALL_GRIDS, &["thermo", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("thermo.csv")).unwrap();
    assert!(text.contains("# units: T, A, U in omega_s; S in k_B"));
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "statistics,T,A,U,S,A_integral_route,A_highT_approx,residual");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 32);
    assert_eq!(rows.iter().filter(|r| r[0] == "bose").count(), 16);
    for r in &rows {
        let v: Vec<f64> = r[1..].iter().map(|x| x.parse().unwrap()).collect();
        assert!(v[6].abs() < 1e-9);
        assert!((v[1] - v[4]).abs() <= 1e-6 * v[1].abs().max(1.0));
    }
}
