use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quantizer::quantize;
use crate::solvers::{qbo_optimize, Problem, ReplicaProblem, RunTrace, SolverConfig};

use super::sde::{langevin_simulate, NoiseSchedule, SdeParams};

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A 1-D objective on a closed interval, with its derivative.
#[derive(Clone)]
pub struct Landscape {
    pub lo: f64,
    pub hi: f64,
    f: Scalar,
    grad: Scalar,
}

impl std::fmt::Debug for Landscape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Landscape")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish_non_exhaustive()
    }
}

impl Landscape {
    pub fn new(
        lo: f64,
        hi: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        grad: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Self {
            lo,
            hi,
            f: Arc::new(f),
            grad: Arc::new(grad),
        })
    }

    /// `x^4 - 2x^2 + 0.3x + 2` on `[-2, 2]`: global minimum near `-1.04`,
    /// a shallower local minimum near `0.96`.
    pub fn double_well() -> Self {
        Self::new(
            -2.0,
            2.0,
            |x| x.powi(4) - 2.0 * x * x + 0.3 * x + 2.0,
            |x| 4.0 * x.powi(3) - 4.0 * x + 0.3,
        )
        .unwrap()
    }

    /// `x^2` on `[-2, 2]`.
    pub fn quadratic() -> Self {
        Self::new(-2.0, 2.0, |x| x * x, |x| 2.0 * x).unwrap()
    }

    pub fn flat(value: f64) -> Self {
        Self::new(-2.0, 2.0, move |_| value, |_| 0.0).unwrap()
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn slope(&self, x: f64) -> f64 {
        (self.grad)(x)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn grid(&self, grid_n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = self.width() / (grid_n - 1) as f64;
        (0..grid_n).map(move |k| if k + 1 == grid_n { self.hi } else { self.lo + k as f64 * step })
    }
}

/// Interval around the global minimizer bounded by the neighbouring maxima
/// (or the domain ends).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Basin {
    pub lo: f64,
    pub hi: f64,
    pub argmin: f64,
}

impl Basin {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Grid oracle for the global basin: walks outward from the grid minimizer
/// while the objective keeps rising.
pub fn global_basin(land: &Landscape, grid_n: usize) -> Result<Basin> {
    if grid_n < 3 {
        return Err(Error::InvalidArgument(format!("basin grid needs >= 3 points, got {grid_n}")));
    }
    let xs: Vec<f64> = land.grid(grid_n).collect();
    let fs = xs
        .iter()
        .map(|&x| {
            let v = land.value(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(x))
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let m = (0..grid_n).fold(0, |best, k| if fs[k] < fs[best] { k } else { best });
    let mut l = m;
    while l > 0 && fs[l - 1] >= fs[l] {
        l -= 1;
    }
    let mut r = m;
    while r + 1 < grid_n && fs[r + 1] >= fs[r] {
        r += 1;
    }
    Ok(Basin {
        lo: xs[l],
        hi: xs[r],
        argmin: xs[m],
    })
}

/// Blind random search on a [`Landscape`]: every proposal is uniform on the
/// whole interval.
pub struct IntervalProblem<'a> {
    land: &'a Landscape,
    start: f64,
    bound: f64,
}

impl<'a> IntervalProblem<'a> {
    pub fn new(land: &'a Landscape, start: f64) -> Self {
        let bound = land.grid(1001).map(|x| land.value(x)).fold(0.0, f64::max);
        Self {
            land,
            start: start.clamp(land.lo, land.hi),
            bound: 2.0 * bound + 1.0,
        }
    }
}

impl Problem for IntervalProblem<'_> {
    type State = f64;
    type Move = f64;

    fn initial(&self) -> f64 {
        self.start
    }

    fn evaluate(&self, x: &f64) -> f64 {
        self.land.value(*x)
    }

    fn propose<R: Rng + ?Sized>(&self, _x: &f64, rng: &mut R) -> f64 {
        rng.random_range(self.land.lo..=self.land.hi)
    }

    fn apply(&self, x: &mut f64, mv: &f64) {
        *x = *mv;
    }

    fn value_bound(&self) -> Option<f64> {
        Some(self.bound)
    }
}

impl ReplicaProblem for IntervalProblem<'_> {
    fn replica_distance(&self, a: &f64, b: &f64) -> usize {
        (a != b) as usize
    }
}

/// One point of the sublevel-set trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SublevelPoint {
    pub iter: u64,
    pub h_exp: u32,
    pub qp: f64,
    /// Quantized incumbent value defining the set.
    pub threshold: f64,
    /// Riemann-sum measure of `{x : f(x) <= threshold}`.
    pub measure: f64,
}

/// Measure of the set of points no worse than the quantized incumbent, at the
/// start of the run and after every acceptance.
pub fn sublevel_measure_trace<S>(
    f: impl Fn(f64) -> f64,
    domain: (f64, f64),
    grid_n: usize,
    trace: &RunTrace<S>,
) -> Result<Vec<SublevelPoint>> {
    let (a, b) = domain;
    if grid_n < 1000 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 1000, got {grid_n}")));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("bad interval [{a}, {b}]")));
    }
    let base = trace
        .quant
        .ok_or_else(|| Error::InvalidArgument("trace carries no quantization grid".into()))?;
    let cell = (b - a) / grid_n as f64;
    let values = (0..grid_n)
        .map(|k| {
            let x = a + (k as f64 + 0.5) * cell;
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(x))
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let events = trace.records.iter().enumerate().filter(|(i, r)| *i == 0 || r.accepted);
    events
        .map(|(_, r)| {
            let grid = base.with_h_exp(r.h_exp)?;
            let threshold = quantize(r.current_cost, &grid)?.value();
            let inside = values.iter().filter(|&&v| v <= threshold).count();
            Ok(SublevelPoint {
                iter: r.iter,
                h_exp: r.h_exp,
                qp: grid.qp(),
                threshold,
                measure: inside as f64 * cell,
            })
        })
        .collect()
}

/// Optimizer used by [`hitting_rate`]. Every trial starts from a uniform
/// point of the interval.
#[derive(Clone, Debug)]
pub enum HitOptimizer {
    Qbo(SolverConfig),
    Langevin {
        noise: NoiseSchedule,
        c_q: f64,
        dt: f64,
        steps: usize,
    },
}

/// Fraction of independent trials whose final state lies in the global basin.
/// Trial `i` draws from stream `i` of a generator seeded with `seed`, so the
/// result does not depend on the thread count. Diverged paths count as
/// misses.
pub fn hitting_rate(land: &Landscape, optimizer: &HitOptimizer, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let basin = global_basin(land, 100_001)?;
    let hits: usize = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x0 = rng.random_range(land.lo..=land.hi);
            let run_seed: u64 = rng.random();
            let end = match optimizer {
                HitOptimizer::Qbo(cfg) => {
                    let p = IntervalProblem::new(land, x0);
                    Some(qbo_optimize(&p, cfg, run_seed).final_state)
                }
                HitOptimizer::Langevin {
                    noise,
                    c_q,
                    dt,
                    steps,
                } => {
                    let params = SdeParams {
                        grad: |x: &[f64], g: &mut [f64]| g[0] = land.slope(x[0]),
                        c_q: *c_q,
                        noise: noise.clone(),
                        dt: *dt,
                        steps: *steps,
                        x0: vec![x0],
                        guard_radius: 1e6,
                        record_every: 0,
                    };
                    langevin_simulate(&params, run_seed).ok().map(|t| t.last()[0])
                }
            };
            end.is_some_and(|x| basin.contains(x)) as usize
        })
        .sum();
    Ok(hits as f64 / trials as f64)
}
