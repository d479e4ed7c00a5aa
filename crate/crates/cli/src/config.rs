//! Run configuration, read from TOML. Every field has a default; the defaults
//! describe the Drude-bath oscillators with `η = 0.4`, `γ = 4`, `ω_S = 1`
//! and `ε_S = −1`.

use std::path::Path;

use impurity_thermo_core::thermo::PowerLaw;
use impurity_thermo_core::{BathModel, BosonicBO, Error as CoreError, FermionicBO, SpectralProvider, Statistics, SumConfig, Tail};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatSelection {
    Bose,
    Fermi,
    Both,
}

impl StatSelection {
    pub fn list(self) -> Vec<Statistics> {
        match self {
            Self::Bose => vec![Statistics::Bose],
            Self::Fermi => vec![Statistics::Fermi],
            Self::Both => vec![Statistics::Bose, Statistics::Fermi],
        }
    }
}

impl std::str::FromStr for StatSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bose" => Ok(Self::Bose),
            "fermi" => Ok(Self::Fermi),
            "both" => Ok(Self::Both),
            other => Err(format!("expected bose, fermi or both, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub omega_s: f64,
    pub epsilon_s: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            omega_s: 1.0,
            epsilon_s: -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathSection {
    pub eta: f64,
    pub gamma: f64,
}

impl Default for BathSection {
    fn default() -> Self {
        Self { eta: 0.4, gamma: 4.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OmegaGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for OmegaGrid {
    fn default() -> Self {
        Self {
            min: -6.0,
            max: 6.0,
            points: 2401,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VarpiGrid {
    pub max: f64,
    pub points: usize,
}

impl Default for VarpiGrid {
    fn default() -> Self {
        Self { max: 40.0, points: 401 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TemperatureGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for TemperatureGrid {
    fn default() -> Self {
        Self {
            min: 0.02,
            max: 100.0,
            points: 200,
            spacing: Spacing::Log,
        }
    }
}

impl TemperatureGrid {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Log => impurity_thermo_core::statfun::log_space(self.min, self.max, self.points),
            Spacing::Linear => {
                let step = (self.max - self.min) / (self.points - 1) as f64;
                (0..self.points).map(|i| self.min + step * i as f64).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    pub omega: OmegaGrid,
    pub varpi: VarpiGrid,
    pub temperature: TemperatureGrid,
}

/// Thresholds used by `verify`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub route_equiv: f64,
    pub equal_area: f64,
    pub zero_temperature: f64,
    pub third_law: f64,
    pub third_law_temperature: f64,
    pub high_t_relative: f64,
    pub high_t_absolute: f64,
    pub kramers_kronig: f64,
    pub zero_integral: f64,
    pub trace_oracle: f64,
    pub lambda_quadrature: f64,
    pub jump: f64,
    pub parity: f64,
    pub identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            route_equiv: 1e-6,
            equal_area: 1e-6,
            zero_temperature: 1e-4,
            third_law: 1e-3,
            third_law_temperature: 0.01,
            high_t_relative: 0.01,
            high_t_absolute: 1e-2,
            kramers_kronig: 1e-8,
            zero_integral: 1e-6,
            trace_oracle: 1e-12,
            lambda_quadrature: 1e-10,
            jump: 1e-9,
            parity: 1e-12,
            identity: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailChoice {
    None,
    PowerLaw,
}

/// Matsubara truncation: a fixed term count, or the automatic rule when absent.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SumSection {
    pub n_terms: Option<usize>,
    pub tail: TailChoice,
}

impl Default for SumSection {
    fn default() -> Self {
        Self {
            n_terms: None,
            tail: TailChoice::PowerLaw,
        }
    }
}

impl SumSection {
    pub fn config(&self, sp: &dyn SpectralProvider, t: f64) -> SumConfig {
        let auto = SumConfig::auto(sp, t);
        SumConfig {
            n_terms: self.n_terms.unwrap_or(auto.n_terms),
            tail: match self.tail {
                TailChoice::None => Tail::None,
                TailChoice::PowerLaw => sp.vartheta_tail().map_or(Tail::None, |law: PowerLaw| Tail::PowerLaw(law)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectraSection {
    /// Offset of the two rows that bracket the jump, in units of `ω_S`.
    pub jump_epsilon: f64,
}

impl Default for SpectraSection {
    fn default() -> Self {
        Self { jump_epsilon: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub statistics: StatSelection,
    pub system: SystemSection,
    pub bath: BathSection,
    pub grids: Grids,
    pub tolerances: Tolerances,
    pub sum: SumSection,
    pub spectra: SpectraSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            statistics: StatSelection::Both,
            system: SystemSection::default(),
            bath: BathSection::default(),
            grids: Grids::default(),
            tolerances: Tolerances::default(),
            sum: SumSection::default(),
            spectra: SpectraSection::default(),
        }
    }
}

fn field(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {msg}"))
}

fn positive(path: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(field(path, format!("must be finite and > 0, got {x}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.grids;
        if !(g.omega.min.is_finite() && g.omega.max.is_finite() && g.omega.min < g.omega.max) {
            return Err(field("grids.omega", format!("need finite min < max, got [{}, {}]", g.omega.min, g.omega.max)));
        }
        if g.omega.points < 2 {
            return Err(field("grids.omega.points", "must be >= 2"));
        }
        positive("grids.varpi.max", g.varpi.max)?;
        if g.varpi.points < 2 {
            return Err(field("grids.varpi.points", "must be >= 2"));
        }
        positive("grids.temperature.min", g.temperature.min)?;
        if !(g.temperature.max.is_finite() && g.temperature.max > g.temperature.min) {
            return Err(field("grids.temperature.max", "must be finite and > min"));
        }
        if g.temperature.points < 2 {
            return Err(field("grids.temperature.points", "must be >= 2"));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("route_equiv", t.route_equiv),
            ("equal_area", t.equal_area),
            ("zero_temperature", t.zero_temperature),
            ("third_law", t.third_law),
            ("third_law_temperature", t.third_law_temperature),
            ("high_t_relative", t.high_t_relative),
            ("high_t_absolute", t.high_t_absolute),
            ("kramers_kronig", t.kramers_kronig),
            ("zero_integral", t.zero_integral),
            ("trace_oracle", t.trace_oracle),
            ("lambda_quadrature", t.lambda_quadrature),
            ("jump", t.jump),
            ("parity", t.parity),
            ("identity", t.identity),
        ] {
            positive(&format!("tolerances.{name}"), v)?;
        }
        if self.sum.n_terms == Some(0) {
            return Err(field("sum.n_terms", "must be >= 1"));
        }
        let eps = self.spectra.jump_epsilon;
        if !(eps.is_finite() && eps > 0.0 && eps < 0.5) {
            return Err(field("spectra.jump_epsilon", format!("must lie in (0, 0.5), got {eps}")));
        }
        for stat in self.statistics.list() {
            self.provider(stat)?;
        }
        Ok(())
    }

    fn bath(&self) -> Result<BathModel, CliError> {
        BathModel::drude(self.bath.eta, self.bath.gamma).map_err(|e| match e {
            CoreError::InvalidParameter { name, reason } => field(&format!("bath.{name}"), reason),
            other => CliError::Config(other.to_string()),
        })
    }

    /// The oscillator selected by `stat`, built from the validated parameters.
    pub fn provider(&self, stat: Statistics) -> Result<Provider, CliError> {
        let bath = self.bath()?;
        match stat {
            Statistics::Bose => BosonicBO::new(self.system.omega_s, bath).map(Provider::Bose).map_err(|e| match e {
                CoreError::Unstable { omega_s, eta0 } => field(
                    "bath.eta",
                    format!("violates the stability condition omega_s^2 - omega_s*eta0 > 0 (omega_s = {omega_s}, eta0 = {eta0})"),
                ),
                other => field("system.omega_s", other),
            }),
            Statistics::Fermi => FermionicBO::new(self.system.epsilon_s, bath)
                .map(Provider::Fermi)
                .map_err(|e| field("system.epsilon_s", e)),
        }
    }
}

/// Either closed-form oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provider {
    Bose(BosonicBO),
    Fermi(FermionicBO),
}

impl Provider {
    pub fn spectral(&self) -> &dyn SpectralProvider {
        match self {
            Self::Bose(b) => b,
            Self::Fermi(f) => f,
        }
    }

    pub fn statistics(&self) -> Statistics {
        self.spectral().statistics()
    }

    /// Frequency of the jump in `φ` (and of the bare pole).
    pub fn omega_s(&self) -> f64 {
        match self {
            Self::Bose(b) => b.omega_s(),
            Self::Fermi(f) => f.omega_s(),
        }
    }
}
