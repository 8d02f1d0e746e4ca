use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::schedules::{ScheduleKind, ScheduleSpec};
use crate::solvers::{Algorithm, CoolingKind, SolverConfig};
use crate::tsp::DEFAULT_RANGE;

/// Benchmark description, read from TOML.
///
/// ```toml
/// cities = [100, 150, 200]
/// range = 200.0
/// instance_seed = 42
/// run_seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
/// iters = 200000
/// algorithms = ["nn", "sa", "qa", "qbo"]
/// output_dir = "results"
/// patience = 0
/// record_wall_time = false
///
/// qbo.base = 2
/// qbo.schedule = "greedy"        # greedy | log | constant
/// qbo.c1 = 4.0
/// qbo.strict_improvement_only = false
/// sa.t0 = 100.0
/// sa.alpha = 0.9995
/// sa.kind = "geometric"          # geometric | logarithmic
/// qa.slices = 8
/// qa.gamma0 = 10.0
/// qa.t = 1.0
/// plot.log_x = false
/// ```
///
/// Unknown keys are rejected. The nearest-neighbour baseline is always run
/// because every improvement figure is measured against it.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub cities: Vec<usize>,
    #[serde(default = "default_range")]
    pub range: f64,
    #[serde(default)]
    pub instance_seed: u64,
    pub run_seeds: Vec<u64>,
    #[serde(default = "default_iters")]
    pub iters: u64,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub patience: u64,
    /// Write measured milliseconds into `wall_ms`; otherwise the column is 0
    /// and reruns are byte-identical.
    #[serde(default)]
    pub record_wall_time: bool,
    #[serde(default)]
    pub qbo: QboSection,
    #[serde(default)]
    pub sa: SaSection,
    #[serde(default)]
    pub qa: QaSection,
    #[serde(default)]
    pub plot: PlotSection,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QboSection {
    pub base: u32,
    pub schedule: ScheduleKind,
    pub c0: f64,
    pub c1: f64,
    pub beta: f64,
    pub c_o: f64,
    pub c_q: f64,
    pub strict_improvement_only: bool,
}

impl Default for QboSection {
    fn default() -> Self {
        let s = ScheduleSpec::default();
        Self {
            base: 2,
            schedule: s.kind,
            c0: s.c0,
            c1: s.c1,
            beta: s.beta,
            c_o: s.c_o,
            c_q: s.c_q,
            strict_improvement_only: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SaSection {
    pub t0: f64,
    pub alpha: f64,
    pub kind: CoolingKind,
}

impl Default for SaSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            t0: d.sa_t0,
            alpha: d.sa_alpha,
            kind: d.sa_kind,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QaSection {
    pub slices: usize,
    pub gamma0: f64,
    pub t: f64,
}

impl Default for QaSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            slices: d.qa_slices,
            gamma0: d.qa_gamma0,
            t: d.qa_t,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlotSection {
    pub log_x: bool,
}

fn default_range() -> f64 {
    DEFAULT_RANGE
}

fn default_iters() -> u64 {
    200_000
}

fn default_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

/// 1-based line of the first `key = ...` assignment, if any.
pub(crate) fn line_of(src: &str, key: &str) -> Option<usize> {
    src.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: format!("cannot read config: {e}"),
        })?;
        Self::from_toml_str(&src, path)
    }

    /// Parses and validates; `origin` only labels diagnostics.
    pub fn from_toml_str(src: &str, origin: &Path) -> Result<Self> {
        let cfg: Self = toml::from_str(src).map_err(|e| Error::Config {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.validate().map_err(|(key, msg)| {
            let at = line_of(src, key).map(|l| format!("line {l}: ")).unwrap_or_default();
            Error::Config {
                path: origin.to_path_buf(),
                message: format!("{at}`{key}` {msg}"),
            }
        })?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.cities.is_empty() {
            return Err(("cities", "must not be empty".into()));
        }
        if let Some(n) = self.cities.iter().find(|&&n| n < 3) {
            return Err(("cities", format!("needs at least 3 cities per instance, got {n}")));
        }
        if self.cities.iter().collect::<HashSet<_>>().len() != self.cities.len() {
            return Err(("cities", "contains duplicates".into()));
        }
        if !(self.range > 0.0) || !self.range.is_finite() {
            return Err(("range", format!("must be positive, got {}", self.range)));
        }
        if self.run_seeds.is_empty() {
            return Err(("run_seeds", "must not be empty".into()));
        }
        if self.run_seeds.iter().collect::<HashSet<_>>().len() != self.run_seeds.len() {
            return Err(("run_seeds", "contains duplicates".into()));
        }
        if self.iters < 1 {
            return Err(("iters", "must be >= 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(("algorithms", "must not be empty".into()));
        }
        let cfg = self.solver_config();
        cfg.schedule.validate().map_err(|m| ("qbo.schedule", m))?;
        if self.qbo.base < 2 {
            return Err(("qbo.base", format!("must be >= 2, got {}", self.qbo.base)));
        }
        if !(self.sa.t0 > 0.0) {
            return Err(("sa.t0", format!("must be positive, got {}", self.sa.t0)));
        }
        if !(self.sa.alpha > 0.0 && self.sa.alpha < 1.0) {
            return Err(("sa.alpha", format!("must lie in (0, 1), got {}", self.sa.alpha)));
        }
        if self.qa.slices < 1 {
            return Err(("qa.slices", "must be >= 1".into()));
        }
        if !(self.qa.gamma0 > 0.0) {
            return Err(("qa.gamma0", format!("must be positive, got {}", self.qa.gamma0)));
        }
        if !(self.qa.t > 0.0) {
            return Err(("qa.t", format!("must be positive, got {}", self.qa.t)));
        }
        Ok(())
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            max_iters: self.iters,
            patience: self.patience,
            schedule: ScheduleSpec {
                kind: self.qbo.schedule,
                c0: self.qbo.c0,
                c1: self.qbo.c1,
                beta: self.qbo.beta,
                c_o: self.qbo.c_o,
                c_q: self.qbo.c_q,
            },
            qbo_base: self.qbo.base,
            strict_improvement_only: self.qbo.strict_improvement_only,
            f_max: None,
            sa_t0: self.sa.t0,
            sa_alpha: self.sa.alpha,
            sa_kind: self.sa.kind,
            qa_slices: self.qa.slices,
            qa_gamma0: self.qa.gamma0,
            qa_t: self.qa.t,
            record_stride: 0,
        }
    }

    /// Algorithms to run, with the baseline first and no repeats.
    pub fn run_list(&self) -> Vec<Algorithm> {
        let mut algs: Vec<Algorithm> = Algorithm::ALL
            .into_iter()
            .filter(|a| *a == Algorithm::Nn || self.algorithms.contains(a))
            .collect();
        algs.dedup();
        algs
    }
}
