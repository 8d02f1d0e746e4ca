use std::cell::RefCell;

use rand::Rng;

use crate::error::{Error, Result};
use crate::quantizer::{quantize, QuantConfig};
use crate::solvers::{qbo_optimize, Problem, SolverConfig};

use super::mean_var;

/// Estimators refuse shorter streams.
pub const MIN_SAMPLES: usize = 10_000;

/// Rounding error `Q_p * (f^Q - f)` of the `t`-th value of a stream, in grid
/// units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorSample {
    pub eps: f64,
    pub t: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorStats {
    pub n: usize,
    /// Sample mean of `eps / Q_p`.
    pub mean: f64,
    /// Sample variance of `eps / Q_p`.
    pub variance: f64,
    /// Lag-1 autocorrelation of `eps`.
    pub lag1_autocorr: f64,
    /// `1 / (12 Q_p^2)`.
    pub expected_variance: f64,
    /// The stream has (almost) no spread in its errors, so the uniform-noise
    /// model does not apply.
    pub degenerate: bool,
}

impl ErrorStats {
    /// `|mean| <= 3 sqrt(var / N)`.
    pub fn mean_ok(&self) -> bool {
        self.mean.abs() <= 3.0 * (self.variance / self.n as f64).sqrt()
    }

    /// Variance within `tol` (relative) of `1 / (12 Q_p^2)`.
    pub fn variance_ok(&self, tol: f64) -> bool {
        (self.variance / self.expected_variance - 1.0).abs() <= tol
    }

    /// `|r1| <= 3 / sqrt(N)`.
    pub fn independence_ok(&self) -> bool {
        self.lag1_autocorr.abs() <= 3.0 / (self.n as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffErrorStats {
    /// Number of differences, one less than the number of samples.
    pub n: usize,
    /// Sample variance of `eps[t + 1] - eps[t]`, in grid units.
    pub variance: f64,
    /// Twice the variance of a single uniform error.
    pub iid_value: f64,
    /// The constant used by the default schedules.
    pub schedule_c_q: f64,
    pub degenerate: bool,
}

const DEGENERATE_RATIO: f64 = 1e-6;

fn check_len(n: usize) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            need: MIN_SAMPLES,
        });
    }
    Ok(())
}

/// Quantizes every value on `cfg` and returns the rounding errors.
pub fn error_samples(f_samples: &[f64], cfg: &QuantConfig) -> Result<Vec<ErrorSample>> {
    f_samples
        .iter()
        .enumerate()
        .map(|(t, &f)| {
            let q = quantize(f, cfg)?;
            Ok(ErrorSample {
                eps: q.error_for(f),
                t,
            })
        })
        .collect()
}

fn lag1(xs: &[f64], mean: f64) -> f64 {
    let den: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    if den == 0.0 {
        return 0.0;
    }
    let num: f64 = xs.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
    num / den
}

pub fn error_stats(f_samples: &[f64], cfg: &QuantConfig) -> Result<ErrorStats> {
    check_len(f_samples.len())?;
    let eps: Vec<f64> = error_samples(f_samples, cfg)?.iter().map(|s| s.eps).collect();
    let qp = cfg.qp();
    let scaled: Vec<f64> = eps.iter().map(|e| e / qp).collect();
    let (mean, variance) = mean_var(&scaled);
    let (eps_mean, eps_var) = mean_var(&eps);
    Ok(ErrorStats {
        n: eps.len(),
        mean,
        variance,
        lag1_autocorr: lag1(&eps, eps_mean),
        expected_variance: 1.0 / (12.0 * qp * qp),
        degenerate: eps_var <= DEGENERATE_RATIO / 12.0,
    })
}

/// Statistics of errors that were already measured in grid units, possibly
/// on different grids; `mean` and `variance` are reported in grid units.
pub fn grid_error_stats(samples: &[ErrorSample]) -> Result<ErrorStats> {
    check_len(samples.len())?;
    let eps: Vec<f64> = samples.iter().map(|s| s.eps).collect();
    let (mean, variance) = mean_var(&eps);
    Ok(ErrorStats {
        n: eps.len(),
        mean,
        variance,
        lag1_autocorr: lag1(&eps, mean),
        expected_variance: 1.0 / 12.0,
        degenerate: variance <= DEGENERATE_RATIO / 12.0,
    })
}

/// Rounding errors of every candidate value a QBO run quantized, each on the
/// grid in force at that iteration. Candidates beyond the exactness limit are
/// skipped.
pub fn qbo_candidate_errors<P: Problem>(problem: &P, cfg: &SolverConfig, seed: u64) -> Result<Vec<ErrorSample>> {
    let rec = Recording {
        inner: problem,
        seen: RefCell::new(Vec::new()),
    };
    let cfg = SolverConfig {
        record_stride: 1,
        patience: 0,
        ..cfg.clone()
    };
    let trace = qbo_optimize(&rec, &cfg, seed);
    let base = trace.quant.expect("QBO traces carry their grid");
    let seen = rec.seen.into_inner();
    let mut out = Vec::with_capacity(seen.len());
    for (t, &f) in seen.iter().enumerate() {
        // records[t] holds the state before iteration t + 1
        let grid = base.with_h_exp(trace.records[t].h_exp)?;
        if let Ok(q) = quantize(f, &grid) {
            out.push(ErrorSample { eps: q.error_for(f), t });
        }
    }
    Ok(out)
}

struct Recording<'a, P> {
    inner: &'a P,
    seen: RefCell<Vec<f64>>,
}

impl<P: Problem> Problem for Recording<'_, P> {
    type State = P::State;
    type Move = P::Move;

    fn initial(&self) -> P::State {
        self.inner.initial()
    }

    fn evaluate(&self, state: &P::State) -> f64 {
        self.inner.evaluate(state)
    }

    fn propose<R: Rng + ?Sized>(&self, state: &P::State, rng: &mut R) -> P::Move {
        self.inner.propose(state, rng)
    }

    fn apply(&self, state: &mut P::State, mv: &P::Move) {
        self.inner.apply(state, mv)
    }

    fn candidate_cost(&self, state: &P::State, current: f64, mv: &P::Move) -> f64 {
        let c = self.inner.candidate_cost(state, current, mv);
        self.seen.borrow_mut().push(c);
        c
    }

    fn value_bound(&self) -> Option<f64> {
        self.inner.value_bound()
    }
}

pub fn diff_error_stats(f_samples: &[f64], cfg: &QuantConfig) -> Result<DiffErrorStats> {
    check_len(f_samples.len())?;
    let eps: Vec<f64> = error_samples(f_samples, cfg)?.iter().map(|s| s.eps).collect();
    let diffs: Vec<f64> = eps.windows(2).map(|w| w[1] - w[0]).collect();
    let (_, variance) = mean_var(&diffs);
    Ok(DiffErrorStats {
        n: diffs.len(),
        variance,
        iid_value: 1.0 / 6.0,
        schedule_c_q: 1.0 / 3.0,
        degenerate: variance <= DEGENERATE_RATIO / 6.0,
    })
}
