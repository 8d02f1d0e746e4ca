use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::errors::{diff_error_stats, error_stats, grid_error_stats, qbo_candidate_errors};
use super::landscape::{global_basin, hitting_rate, HitOptimizer, Landscape};
use super::report::Report;
use super::sde::{langevin_simulate, NoiseSchedule, SdeParams};
use super::mean_var;
use crate::error::{Error, Result};
use crate::quantizer::QuantConfig;
use crate::schedules::ScheduleSpec;
use crate::solvers::SolverConfig;
use crate::tsp::{generate_instance, TspProblem};

/// Candidate stream length for the TSP part of [`wnh_report`].
pub const TSP_STREAM_ITERS: u64 = 200_000;
const TSP_STREAM_CITIES: usize = 100;

/// Base-2 grid with the given `Q_p`; `qp` must be an exact power of two.
pub fn binary_grid(qp: f64) -> Result<QuantConfig> {
    if !(qp > 0.0) || !qp.is_finite() {
        return Err(Error::InvalidArgument(format!("Q_p must be positive, got {qp}")));
    }
    let e = qp.log2().round();
    if 2f64.powi(e as i32) != qp {
        return Err(Error::InvalidArgument(format!("Q_p must be a power of two, got {qp}")));
    }
    QuantConfig::new(2, 0, e as i32)
}

/// Rounding-error statistics of `n` uniform values on `[0, 100)` quantized
/// with `Q_p = qp`, followed by the same statistics for the candidate stream
/// of one QBO run on a random 100-city tour. The TSP rows are informational.
pub fn wnh_report(n: usize, qp: f64, seed: u64) -> Result<Report> {
    let grid = binary_grid(qp)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0)).collect();
    let s = error_stats(&xs, &grid)?;
    let d = diff_error_stats(&xs, &grid)?;

    let mut r = Report::default();
    let band = 3.0 * (s.variance / n as f64).sqrt();
    r.push("eps_mean", 0.0, s.mean, s.n, s.mean_ok() && !s.degenerate);
    r.push("eps_variance", s.expected_variance, s.variance, s.n, s.variance_ok(0.02));
    r.push("eps_mean_band", band, s.mean.abs(), s.n, s.mean_ok());
    r.push("eps_lag1_autocorr", 0.0, s.lag1_autocorr, s.n, s.independence_ok());
    let close = |x: f64, want: f64| (x / want - 1.0).abs() <= 0.02;
    r.push("diff_variance_iid", d.iid_value, d.variance, d.n, close(d.variance, d.iid_value));
    r.push(
        "diff_variance_schedule_c_q",
        d.schedule_c_q,
        d.variance,
        d.n,
        close(d.variance, d.schedule_c_q),
    );

    let inst = generate_instance(TSP_STREAM_CITIES, 200.0, seed)?;
    let p = TspProblem::from_nn(&inst)?;
    let errs = qbo_candidate_errors(&p, &SolverConfig::with_iters(TSP_STREAM_ITERS), seed)?;
    let t = grid_error_stats(&errs)?;
    r.push("tsp_stream_eps_variance", t.expected_variance, t.variance, t.n, t.variance_ok(0.02));
    r.push("tsp_stream_eps_lag1_autocorr", 0.0, t.lag1_autocorr, t.n, t.independence_ok());
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LandscapeKind {
    DoubleWell,
    Quadratic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Log,
    Constant,
    Quantized,
}

/// `stats sde` settings, read from TOML. Every key is optional.
///
/// ```toml
/// landscape = "double_well"   # double_well | quadratic
/// paths = 1000
/// steps = 10000
/// dt = 0.01
/// c_q = 0.3333333333333333
/// noise = "log"               # log | constant | quantized
/// c_o = 1.0
/// sigma = 0.05                # constant-noise comparison level
/// qbo_iters = 2000
/// diffusion_paths = 10000
/// diffusion_steps = 200
/// ```
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SdeConfig {
    pub landscape: LandscapeKind,
    pub paths: usize,
    pub steps: usize,
    pub dt: f64,
    pub c_q: f64,
    pub noise: NoiseKind,
    pub c_o: f64,
    pub sigma: f64,
    pub qbo_iters: u64,
    pub diffusion_paths: usize,
    pub diffusion_steps: usize,
}

impl Default for SdeConfig {
    fn default() -> Self {
        Self {
            landscape: LandscapeKind::DoubleWell,
            paths: 1000,
            steps: 10_000,
            dt: 0.01,
            c_q: 1.0 / 3.0,
            noise: NoiseKind::Log,
            c_o: 1.0,
            sigma: 0.05,
            qbo_iters: 2_000,
            diffusion_paths: 10_000,
            diffusion_steps: 200,
        }
    }
}

impl SdeConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let config_err = |message: String| Error::Config {
            path: path.to_path_buf(),
            message,
        };
        let src = std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read config: {e}")))?;
        let cfg: Self = toml::from_str(&src).map_err(|e| config_err(e.to_string()))?;
        cfg.validate().map_err(config_err)?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if self.paths < 1 || self.diffusion_paths < 2 {
            return Err("paths must be >= 1 and diffusion_paths >= 2".into());
        }
        if self.steps < 1 || self.diffusion_steps < 1 {
            return Err("steps must be >= 1".into());
        }
        if !(self.dt > 0.0) || !(self.c_q > 0.0) || !(self.c_o > 0.0) || !(self.sigma >= 0.0) {
            return Err("dt, c_q and c_o must be positive and sigma non-negative".into());
        }
        if self.qbo_iters < 1 {
            return Err("qbo_iters must be >= 1".into());
        }
        Ok(())
    }

    pub fn landscape(&self) -> Landscape {
        match self.landscape {
            LandscapeKind::DoubleWell => Landscape::double_well(),
            LandscapeKind::Quadratic => Landscape::quadratic(),
        }
    }

    pub fn noise(&self) -> NoiseSchedule {
        match self.noise {
            NoiseKind::Log => NoiseSchedule::Log { c_o: self.c_o },
            NoiseKind::Constant => NoiseSchedule::Constant(self.sigma),
            NoiseKind::Quantized => NoiseSchedule::Quantized {
                base: 2,
                eta_pow: 0,
                spec: ScheduleSpec::log(),
            },
        }
    }

    fn langevin(&self, noise: NoiseSchedule) -> HitOptimizer {
        HitOptimizer::Langevin {
            noise,
            c_q: self.c_q,
            dt: self.dt,
            steps: self.steps,
        }
    }
}

/// `var(X_K - X_0)` of pure unit diffusion over `paths` paths of `steps`
/// steps, all seeded from `seed`.
pub fn diffusion_variance(paths: usize, steps: usize, dt: f64, seed: u64) -> Result<f64> {
    let params = SdeParams {
        grad: |_: &[f64], g: &mut [f64]| g.fill(0.0),
        c_q: 1.0,
        noise: NoiseSchedule::Constant(1.0),
        dt,
        steps,
        x0: vec![0.0],
        guard_radius: f64::INFINITY,
        record_every: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ends = (0..paths)
        .map(|_| langevin_simulate(&params, rng.random()).map(|t| t.last()[0]))
        .collect::<Result<Vec<f64>>>()?;
    Ok(mean_var(&ends).1)
}

/// Diffusion scaling, basin fractions under the configured noise and under
/// plain descent, and the QBO hit rate with the log schedule.
pub fn sde_report(cfg: &SdeConfig, seed: u64) -> Result<Report> {
    let mut r = Report::default();
    let expect = cfg.diffusion_steps as f64 * cfg.dt;
    let var = diffusion_variance(cfg.diffusion_paths, cfg.diffusion_steps, cfg.dt, seed)?;
    r.push("diffusion_variance", expect, var, cfg.diffusion_paths, (var / expect - 1.0).abs() <= 0.05);

    let land = cfg.landscape();
    let basin = global_basin(&land, 100_001)?;
    let ratio = basin.width() / land.width();
    let n = cfg.paths;
    let annealed = hitting_rate(&land, &cfg.langevin(cfg.noise()), n, seed)?;
    let small = hitting_rate(&land, &cfg.langevin(NoiseSchedule::Constant(cfg.sigma)), n, seed)?;
    let descent = hitting_rate(&land, &cfg.langevin(NoiseSchedule::Constant(0.0)), n, seed)?;
    r.push("langevin_basin_fraction_vs_constant_sigma", small, annealed, n, annealed >= small);
    r.push("descent_basin_fraction", ratio, descent, n, (descent - ratio).abs() <= 0.05);

    let qbo_cfg = SolverConfig {
        schedule: ScheduleSpec::log(),
        ..SolverConfig::with_iters(cfg.qbo_iters)
    };
    let qbo = hitting_rate(&land, &HitOptimizer::Qbo(qbo_cfg), n, seed)?;
    r.push("qbo_log_basin_fraction", 0.95, qbo, n, qbo >= 0.95);
    let se = (descent * (1.0 - descent) / n as f64 + qbo * (1.0 - qbo) / n as f64).sqrt();
    r.push("qbo_minus_descent", 3.0 * se, qbo - descent, n, qbo - descent > 3.0 * se);
    Ok(r)
}
