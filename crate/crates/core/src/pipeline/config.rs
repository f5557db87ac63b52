use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{FitBox, DEFAULT_TRANSIENT_WINDOW, ALPHA_THRESHOLD};
use crate::dynamics::{Propagator, TimeGrid, DEFAULT_EPS_M, DEFAULT_POINTS_PER_DECADE, DEFAULT_T_MAX, DEFAULT_T_MIN};
use crate::eigensolve::SolverSettings;
use crate::entanglement::{GgmMode, DEFAULT_HISTOGRAM_EPS};
use crate::error::{Error, Result};
use crate::model::{BoundaryCondition, CouplingParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Spectrum,
    EquilibriumSweep,
    Distribution,
    Dynamics,
    Fss,
    Transient,
    Steady,
}

impl Pipeline {
    pub const ALL: [Pipeline; 7] = [
        Pipeline::Spectrum,
        Pipeline::EquilibriumSweep,
        Pipeline::Distribution,
        Pipeline::Dynamics,
        Pipeline::Fss,
        Pipeline::Transient,
        Pipeline::Steady,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Spectrum => "spectrum",
            Pipeline::EquilibriumSweep => "equilibrium_sweep",
            Pipeline::Distribution => "distribution",
            Pipeline::Dynamics => "dynamics",
            Pipeline::Fss => "fss",
            Pipeline::Transient => "transient",
            Pipeline::Steady => "steady",
        }
    }

    pub fn from_name(name: &str) -> Option<Pipeline> {
        Pipeline::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// `(N, n_eps, n_R, n_R')` per chain length; `n_R'` for `N = 18` is not tabulated and reuses `n_R`.
pub const SAMPLING_TABLE: [(usize, usize, usize, usize); 6] = [
    (8, 22, 10_000, 5_000),
    (10, 80, 10_000, 3_000),
    (12, 200, 5_000, 200),
    (14, 400, 2_000, 1_000),
    (16, 800, 500, 1_000),
    (18, 1_000, 100, 100),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(rename = "N")]
    pub n_sites: Vec<usize>,
    pub h: Vec<f64>,
    #[serde(rename = "D", default)]
    pub d: f64,
    #[serde(rename = "Dprime", default)]
    pub d_prime: f64,
    #[serde(rename = "J", default = "one")]
    pub j: f64,
    /// Periodic for eigenstate pipelines and open for dynamics when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryCondition>,
}

fn one() -> f64 {
    1.0
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            n_sites: Vec::new(),
            h: Vec::new(),
            d: 0.0,
            d_prime: 0.0,
            j: 1.0,
            boundary: None,
        }
    }
}

impl ModelConfig {
    pub fn coupling(&self) -> Result<CouplingParams> {
        CouplingParams::new(self.j, self.d, self.d_prime)
    }

    pub fn boundary_for(&self, pipeline: Pipeline) -> BoundaryCondition {
        self.boundary.unwrap_or(match pipeline {
            Pipeline::Dynamics => BoundaryCondition::Open,
            _ => BoundaryCondition::Periodic,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_eps: Option<usize>,
    #[serde(rename = "n_R", skip_serializing_if = "Option::is_none")]
    pub n_realizations: Option<usize>,
    #[serde(rename = "n_R_prime", skip_serializing_if = "Option::is_none")]
    pub n_quench_realizations: Option<usize>,
    pub master_seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            n_eps: None,
            n_realizations: None,
            n_quench_realizations: None,
            master_seed: 20_240_601,
        }
    }
}

fn table_row(n: usize, field: &str) -> Result<(usize, usize, usize, usize)> {
    SAMPLING_TABLE
        .iter()
        .copied()
        .find(|r| r.0 == n)
        .ok_or_else(|| Error::Config(format!("sampling.{field}: no default for N = {n}; set it explicitly")))
}

impl SamplingConfig {
    pub fn n_eps_for(&self, n: usize) -> Result<usize> {
        self.n_eps.map_or_else(|| Ok(table_row(n, "n_eps")?.1), Ok)
    }

    pub fn n_realizations_for(&self, n: usize) -> Result<usize> {
        self.n_realizations.map_or_else(|| Ok(table_row(n, "n_R")?.2), Ok)
    }

    pub fn n_quench_realizations_for(&self, n: usize) -> Result<usize> {
        self.n_quench_realizations.map_or_else(|| Ok(table_row(n, "n_R_prime")?.3), Ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    GapRatio,
    Ggm,
    Ggm1,
    /// `ln |C^zz|` at the largest separation, plus the full profile per point.
    LnCzz,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::GapRatio => "gap_ratio",
            Observable::Ggm => "ggm",
            Observable::Ggm1 => "ggm1",
            Observable::LnCzz => "ln_czz",
        }
    }

    pub fn needs_vectors(self) -> bool {
        self != Observable::GapRatio
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObservablesConfig {
    pub list: Vec<Observable>,
    pub histogram_eps: f64,
}

impl Default for ObservablesConfig {
    fn default() -> Self {
        ObservablesConfig {
            list: vec![Observable::GapRatio, Observable::Ggm, Observable::Ggm1],
            histogram_eps: DEFAULT_HISTOGRAM_EPS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub points_per_decade: usize,
    pub propagator: Propagator,
    pub eps_m: f64,
    pub ggm_mode: GgmMode,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            t_min: DEFAULT_T_MIN,
            t_max: DEFAULT_T_MAX,
            points_per_decade: DEFAULT_POINTS_PER_DECADE,
            propagator: Propagator::Chebyshev,
            eps_m: DEFAULT_EPS_M,
            ggm_mode: GgmMode::SingleSite,
        }
    }
}

impl DynamicsConfig {
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::log_spaced(self.t_min, self.t_max, self.points_per_decade)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    /// Sweep CSV for `fss` and `steady`, dynamics output directory for `transient`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Observables collapsed by `fss`.
    pub observables: Vec<String>,
    #[serde(rename = "box")]
    pub search: FitBox,
    pub transient_window: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_window: Option<(f64, f64)>,
    pub alpha_threshold: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            input: None,
            observables: vec!["ggm".into(), "gap_ratio".into()],
            search: FitBox::default(),
            transient_window: DEFAULT_TRANSIENT_WINDOW,
            steady_window: None,
            alpha_threshold: ALPHA_THRESHOLD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pipeline: Pipeline,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub observables: ObservablesConfig,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        let needs_model = !matches!(self.pipeline, Pipeline::Fss | Pipeline::Transient | Pipeline::Steady);
        if needs_model {
            if m.n_sites.is_empty() {
                return Err(Error::Config("model.N: at least one chain length is required".into()));
            }
            if m.h.is_empty() {
                return Err(Error::Config("model.h: at least one disorder strength is required".into()));
            }
        }
        if let Some(&n) = m.n_sites.iter().find(|&&n| n < 2 || n % 2 != 0 || n > crate::model::MAX_SITES) {
            return Err(Error::Config(format!("model.N: {n} is not an even chain length in 2..={}", crate::model::MAX_SITES)));
        }
        if let Some(h) = m.h.iter().find(|h| !(h.is_finite() && **h >= 0.0)) {
            return Err(Error::Config(format!("model.h: {h} must be finite and non-negative")));
        }
        m.coupling().map_err(|e| Error::Config(format!("model: {e}")))?;
        if needs_model {
            for &n in &m.n_sites {
                match self.pipeline {
                    Pipeline::Dynamics => {
                        self.sampling.n_quench_realizations_for(n)?;
                    }
                    _ => {
                        self.sampling.n_eps_for(n)?;
                        self.sampling.n_realizations_for(n)?;
                    }
                }
            }
        }
        if [self.sampling.n_eps, self.sampling.n_realizations, self.sampling.n_quench_realizations].contains(&Some(0)) {
            return Err(Error::Config("sampling: counts must be positive".into()));
        }
        if !(self.observables.histogram_eps > 0.0 && self.observables.histogram_eps < 0.25) {
            return Err(Error::Config("observables.histogram_eps: must lie in (0, 0.25)".into()));
        }
        self.dynamics.grid().map_err(|e| Error::Config(format!("dynamics: {e}")))?;
        if !(self.dynamics.eps_m > 0.0) {
            return Err(Error::Config("dynamics.eps_m: must be positive".into()));
        }
        let (lo, hi) = self.analysis.transient_window;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Config("analysis.transient_window: need 0 < lo < hi".into()));
        }
        if matches!(self.pipeline, Pipeline::Fss | Pipeline::Transient | Pipeline::Steady) && self.analysis.input.is_none() {
            return Err(Error::Config(format!("analysis.input: required by the {} pipeline", self.pipeline.name())));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }
}

/// Parses and validates a TOML document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Applies `key.path=value` overrides to a TOML document before parsing.
///
/// Values are read as TOML (`[8, 10]`, `0.5`, `"open"`) and fall back to a bare string.
pub fn apply_overrides(text: &str, overrides: &[String]) -> Result<String> {
    let mut doc: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    for o in overrides {
        let (key, raw) = o
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override {o:?} is not key=value")))?;
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        let mut parts: Vec<&str> = key.trim().split('.').collect();
        let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| Error::Config(format!("override {o:?} has an empty key")))?;
        let mut table = &mut doc;
        for p in parts {
            table = table
                .entry(p)
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .ok_or_else(|| Error::Config(format!("override {o:?}: {p} is not a section")))?;
        }
        table.insert(last.to_string(), value);
    }
    toml::to_string(&doc).map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "pipeline = \"equilibrium_sweep\"\n[model]\nN = [10]\nh = [1, 8]\n";

    #[test]
    fn minimal_config_takes_table_defaults() {
        let cfg = parse_config(&MINIMAL.replace("[1, 8]", "[1.0, 8.0]")).unwrap();
        assert_eq!(cfg.sampling.n_eps_for(10).unwrap(), 80);
        assert_eq!(cfg.sampling.n_realizations_for(10).unwrap(), 10_000);
        assert_eq!(cfg.model.boundary_for(cfg.pipeline), BoundaryCondition::Periodic);
        assert_eq!(cfg.solver.dense_max_dim, 3500);
    }

    #[test]
    fn integer_fields_are_accepted_as_floats() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.model.h, vec![1.0, 8.0]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config(&format!("{MINIMAL}foo = 1\n")).unwrap_err();
        assert!(err.to_string().contains("foo"), "{err}");
        assert!(parse_config("pipeline = \"spectrum\"\nfoo = 1\n[model]\nN=[8]\nh=[1.0]\n").is_err());
    }

    #[test]
    fn round_trip() {
        let cfg = parse_config(MINIMAL).unwrap();
        let again = parse_config(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
        let full = parse_config(&apply_overrides(MINIMAL, &["model.boundary=open".into(), "sampling.n_R=7".into(), "dynamics.propagator=dense".into()]).unwrap()).unwrap();
        assert_eq!(parse_config(&full.to_toml().unwrap()).unwrap(), full);
    }

    #[test]
    fn overrides_replace_nested_values() {
        let text = apply_overrides(MINIMAL, &["model.N=[8, 12]".into(), "sampling.master_seed=9".into(), "model.D=0.5".into()]).unwrap();
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.model.n_sites, vec![8, 12]);
        assert_eq!(cfg.sampling.master_seed, 9);
        assert_eq!(cfg.model.d, 0.5);
        assert!(apply_overrides(MINIMAL, &["novalue".into()]).is_err());
    }

    #[test]
    fn validation_names_the_field() {
        let err = parse_config("pipeline = \"equilibrium_sweep\"\n[model]\nN = [6]\nh = [1.0]\n").unwrap_err();
        assert!(err.to_string().contains("sampling.n_eps"), "{err}");
        let err = parse_config("pipeline = \"fss\"\n").unwrap_err();
        assert!(err.to_string().contains("analysis.input"), "{err}");
        let err = parse_config("pipeline = \"spectrum\"\n[model]\nN = [7]\nh = [1.0]\n").unwrap_err();
        assert!(err.to_string().contains("model.N"), "{err}");
    }
}
