//! Empirical checks of the quantization-noise model and the continuous-time
//! picture behind the optimizer.
//!
//! * [`error_stats`] and [`diff_error_stats`] measure the rounding error of
//!   dense value streams.
//! * [`sublevel_measure_trace`] tracks how the set of points no worse than the
//!   quantized incumbent shrinks during a run.
//! * [`langevin_simulate`] integrates the noisy gradient flow with
//!   Euler–Maruyama, and [`hitting_rate`] estimates how often an optimizer
//!   ends in the global basin of a 1-D landscape.

mod errors;
mod lab;
mod landscape;
mod report;
mod sde;

pub use errors::{
    diff_error_stats, error_samples, error_stats, grid_error_stats, qbo_candidate_errors,
    DiffErrorStats, ErrorSample, ErrorStats, MIN_SAMPLES,
};
pub use lab::{
    binary_grid, diffusion_variance, sde_report, wnh_report, LandscapeKind, NoiseKind, SdeConfig,
    TSP_STREAM_ITERS,
};
pub use landscape::{
    global_basin, hitting_rate, sublevel_measure_trace, Basin, HitOptimizer, IntervalProblem,
    Landscape, SublevelPoint,
};
pub use report::{Report, ReportRow};
pub use sde::{langevin_simulate, NoiseSchedule, SdeParams, Trajectory};

/// Mean and unbiased sample variance.
pub(crate) fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    (mean, if xs.len() > 1 { ss / (n - 1.0) } else { 0.0 })
}
