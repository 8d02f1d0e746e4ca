//! Optimizers behind a common problem interface.
//!
//! Every solver is a single sequential run owning a `ChaCha8Rng` seeded from
//! the caller's seed, so `(problem, config, seed)` fully determines the
//! returned [`RunTrace`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quantizer::QuantConfig;
use crate::schedules::ScheduleSpec;

mod brute;
mod qa;
mod qbo;
mod sa;

pub use brute::{brute_force_tsp, BRUTE_FORCE_MAX};
pub use qa::{coupling_strength, qa_optimize};
pub use qbo::qbo_optimize;
pub use sa::{acceptance_probability, metropolis_accept, sa_optimize, temperature};

/// Minimization problem over a nonnegative objective.
pub trait Problem {
    type State: Clone;
    type Move;

    fn initial(&self) -> Self::State;

    /// Objective value; must be deterministic and `>= 0`.
    fn evaluate(&self, state: &Self::State) -> f64;

    fn propose<R: Rng + ?Sized>(&self, state: &Self::State, rng: &mut R) -> Self::Move;

    fn apply(&self, state: &mut Self::State, mv: &Self::Move);

    /// Objective after applying `mv` to `state`, whose objective is `current`.
    /// Problems with cheap incremental costs override this.
    fn candidate_cost(&self, state: &Self::State, current: f64, mv: &Self::Move) -> f64 {
        let _ = current;
        let mut next = state.clone();
        self.apply(&mut next, mv);
        self.evaluate(&next)
    }

    /// Known upper bound on the objective, used to size the exactness cap.
    fn value_bound(&self) -> Option<f64> {
        None
    }
}

/// Extra capability needed by the replica-coupled quantum annealer.
pub trait ReplicaProblem: Problem {
    fn replica_distance(&self, a: &Self::State, b: &Self::State) -> usize;

    /// `d(apply(state, mv), other) - d(state, other)`.
    fn distance_change(&self, state: &Self::State, mv: &Self::Move, other: &Self::State) -> i64 {
        let mut next = state.clone();
        self.apply(&mut next, mv);
        self.replica_distance(&next, other) as i64 - self.replica_distance(state, other) as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nn,
    Sa,
    Qa,
    Qbo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Nn, Algorithm::Sa, Algorithm::Qa, Algorithm::Qbo];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Nn => "nn",
            Algorithm::Sa => "sa",
            Algorithm::Qa => "qa",
            Algorithm::Qbo => "qbo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected nn, sa, qa or qbo)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoolingKind {
    /// `T_k = t0 * alpha^k`
    Geometric,
    /// `T_k = t0 / ln(k + 2)`
    Logarithmic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub max_iters: u64,
    /// Stop after this many iterations without a new best cost; 0 disables.
    pub patience: u64,
    pub schedule: ScheduleSpec,
    pub qbo_base: u32,
    /// Only strict quantized improvements advance `h`; ties are still accepted.
    pub strict_improvement_only: bool,
    /// Largest objective value the exactness cap must cover. Defaults to the
    /// problem's bound, or the initial value.
    pub f_max: Option<f64>,
    pub sa_t0: f64,
    pub sa_alpha: f64,
    pub sa_kind: CoolingKind,
    pub qa_slices: usize,
    pub qa_gamma0: f64,
    pub qa_t: f64,
    /// Record every `record_stride`-th iteration plus every acceptance.
    /// 0 picks 1 for budgets up to 10^4 and `ceil(max_iters / 10^4)` above.
    pub record_stride: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 200_000,
            patience: 0,
            schedule: ScheduleSpec::default(),
            qbo_base: 2,
            strict_improvement_only: false,
            f_max: None,
            sa_t0: 100.0,
            sa_alpha: 0.9995,
            sa_kind: CoolingKind::Geometric,
            qa_slices: 8,
            qa_gamma0: 10.0,
            qa_t: 1.0,
            record_stride: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_iters(max_iters: u64) -> Self {
        Self {
            max_iters,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_iters < 1 {
            return Err("max_iters must be >= 1".into());
        }
        self.schedule.validate()?;
        if self.qbo_base < 2 {
            return Err(format!("qbo base must be >= 2, got {}", self.qbo_base));
        }
        if !(self.sa_t0 > 0.0) {
            return Err(format!("sa t0 must be positive, got {}", self.sa_t0));
        }
        if !(self.sa_alpha > 0.0 && self.sa_alpha < 1.0) {
            return Err(format!("sa alpha must lie in (0, 1), got {}", self.sa_alpha));
        }
        if self.qa_slices < 1 {
            return Err("qa slices must be >= 1".into());
        }
        if !(self.qa_gamma0 > 0.0) || !(self.qa_t > 0.0) {
            return Err("qa gamma0 and t must be positive".into());
        }
        Ok(())
    }

    pub fn effective_stride(&self) -> u64 {
        match self.record_stride {
            0 if self.max_iters <= 10_000 => 1,
            0 => self.max_iters.div_ceil(10_000),
            s => s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    pub iter: u64,
    /// Best raw objective seen so far.
    pub best_cost: f64,
    /// Raw objective of the incumbent after this iteration.
    pub current_cost: f64,
    pub h_exp: u32,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct RunTrace<S> {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub records: Vec<TraceRecord>,
    /// Incumbent when the run stopped.
    pub final_state: S,
    pub final_cost: f64,
    pub best_state: S,
    pub best_cost: f64,
    pub iterations: u64,
    /// Base and `eta` of the QBO grids (with `h_exp = 0`).
    pub quant: Option<QuantConfig>,
    /// The schedule hit the exactness cap at least once.
    pub h_capped: bool,
    /// Candidates rejected because they could not be quantized exactly.
    pub overflow_rejections: u64,
    pub wall_time: Duration,
    /// Milliseconds since the start of the run, one entry per record.
    pub record_ms: Vec<f64>,
}

impl<S> RunTrace<S> {
    pub fn acceptances(&self) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(|r| r.accepted)
    }
}

/// Builds trace records with the configured downsampling.
pub(crate) struct Recorder {
    stride: u64,
    last_iter: u64,
    started: Instant,
    records: Vec<TraceRecord>,
    ms: Vec<f64>,
}

impl Recorder {
    pub(crate) fn new(cfg: &SolverConfig) -> Self {
        Self {
            stride: cfg.effective_stride(),
            last_iter: cfg.max_iters,
            started: Instant::now(),
            records: Vec::new(),
            ms: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, rec: TraceRecord, force: bool) {
        if force || rec.accepted || rec.iter.is_multiple_of(self.stride) || rec.iter == self.last_iter {
            self.records.push(rec);
            self.ms.push(self.started.elapsed().as_secs_f64() * 1e3);
        }
    }

    /// Makes sure the final iteration is present (patience stops end early).
    pub(crate) fn finish(mut self, last: TraceRecord) -> (Vec<TraceRecord>, Vec<f64>) {
        if self.records.last().map(|r| r.iter) != Some(last.iter) {
            self.records.push(last);
            self.ms.push(self.started.elapsed().as_secs_f64() * 1e3);
        }
        (self.records, self.ms)
    }
}

/// Single-record trace of the starting state; the `nn` baseline.
pub fn initial_only<P: Problem>(problem: &P, seed: u64) -> RunTrace<P::State> {
    let state = problem.initial();
    let cost = problem.evaluate(&state);
    RunTrace {
        algorithm: Algorithm::Nn,
        seed,
        records: vec![TraceRecord {
            iter: 0,
            best_cost: cost,
            current_cost: cost,
            h_exp: 0,
            accepted: false,
        }],
        final_state: state.clone(),
        final_cost: cost,
        best_state: state,
        best_cost: cost,
        iterations: 0,
        quant: None,
        h_capped: false,
        overflow_rejections: 0,
        wall_time: Duration::ZERO,
        record_ms: vec![0.0],
    }
}

/// Dispatches on the algorithm tag.
pub fn run<P: ReplicaProblem>(
    algorithm: Algorithm,
    problem: &P,
    cfg: &SolverConfig,
    seed: u64,
) -> RunTrace<P::State> {
    match algorithm {
        Algorithm::Nn => initial_only(problem, seed),
        Algorithm::Sa => sa_optimize(problem, cfg, seed),
        Algorithm::Qa => qa_optimize(problem, cfg, seed),
        Algorithm::Qbo => qbo_optimize(problem, cfg, seed),
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("ga".parse::<Algorithm>().is_err());
    }

    #[test]
    fn stride_policy() {
        assert_eq!(SolverConfig::with_iters(10_000).effective_stride(), 1);
        assert_eq!(SolverConfig::with_iters(200_000).effective_stride(), 20);
        assert_eq!(SolverConfig::with_iters(10_001).effective_stride(), 2);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            sa_alpha: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(SolverConfig::with_iters(0).validate().is_err());
    }
}
