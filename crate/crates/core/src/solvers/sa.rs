use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, CoolingKind, Problem, Recorder, RunTrace, SolverConfig, TraceRecord};

/// Temperature at iteration `k` (0-based).
pub fn temperature(kind: CoolingKind, t0: f64, alpha: f64, k: u64) -> f64 {
    match kind {
        CoolingKind::Geometric => t0 * alpha.powf(k as f64),
        CoolingKind::Logarithmic => t0 / ((k as f64) + 2.0).ln(),
    }
}

/// Metropolis acceptance probability `min(1, exp(-delta / temp))`.
pub fn acceptance_probability(delta: f64, temp: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else {
        (-delta / temp).exp()
    }
}

/// Metropolis test against a uniform draw `u` in `[0, 1)`.
pub fn metropolis_accept(delta: f64, temp: f64, u: f64) -> bool {
    delta <= 0.0 || u < acceptance_probability(delta, temp)
}

pub fn sa_optimize<P: Problem>(problem: &P, cfg: &SolverConfig, seed: u64) -> RunTrace<P::State> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut state = problem.initial();
    let mut cost = problem.evaluate(&state);
    let mut best_state = state.clone();
    let mut best_cost = cost;
    let mut since_best = 0u64;

    let mut rec = Recorder::new(cfg);
    let first = TraceRecord {
        iter: 0,
        best_cost,
        current_cost: cost,
        h_exp: 0,
        accepted: false,
    };
    rec.push(first, true);
    let mut last = first;
    let mut iterations = 0;

    for t in 1..=cfg.max_iters {
        iterations = t;
        let temp = temperature(cfg.sa_kind, cfg.sa_t0, cfg.sa_alpha, t - 1);
        let mv = problem.propose(&state, &mut rng);
        let cand = problem.candidate_cost(&state, cost, &mv);
        let delta = cand - cost;
        // the uniform draw is taken unconditionally so the RNG stream does
        // not depend on the sign of delta
        let u: f64 = rng.random();
        let accepted = metropolis_accept(delta, temp, u);
        if accepted {
            problem.apply(&mut state, &mv);
            cost = cand;
        }
        if cost < best_cost {
            best_cost = cost;
            best_state.clone_from(&state);
            since_best = 0;
        } else {
            since_best += 1;
        }
        last = TraceRecord {
            iter: t,
            best_cost,
            current_cost: cost,
            h_exp: 0,
            accepted,
        };
        rec.push(last, false);
        if cfg.patience > 0 && since_best >= cfg.patience {
            break;
        }
    }

    let (records, record_ms) = rec.finish(last);
    RunTrace {
        algorithm: Algorithm::Sa,
        seed,
        records,
        record_ms,
        final_state: state,
        final_cost: cost,
        best_state,
        best_cost,
        iterations,
        quant: None,
        h_capped: false,
        overflow_rejections: 0,
        wall_time: started.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::testing::parabola;

    #[test]
    fn downhill_always_accepted() {
        assert_eq!(acceptance_probability(-1.0, 1e-9), 1.0);
        assert_eq!(acceptance_probability(-1.0, 1e9), 1.0);
        assert!(metropolis_accept(-1.0, 0.5, 0.999_999));
    }

    #[test]
    fn uphill_at_delta_equal_t_is_e_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let trials = 100_000;
        let hits = (0..trials)
            .filter(|_| metropolis_accept(2.5, 2.5, rng.random()))
            .count();
        let rate = hits as f64 / trials as f64;
        assert!((rate - (-1f64).exp()).abs() < 0.01, "rate {rate}");
    }

    #[test]
    fn frozen_limit_is_strict_descent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!((0..100_000).all(|_| !metropolis_accept(1e-6, 1e-12, rng.random())));
    }

    #[test]
    fn schedules() {
        assert_eq!(temperature(CoolingKind::Geometric, 10.0, 0.5, 0), 10.0);
        assert_eq!(temperature(CoolingKind::Geometric, 10.0, 0.5, 2), 2.5);
        let t = temperature(CoolingKind::Logarithmic, 1.0, 0.5, 0);
        assert!((t - 1.0 / 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn parabola_reaches_zero_and_is_deterministic() {
        let p = parabola();
        let cfg = SolverConfig::with_iters(200);
        let a = sa_optimize(&p, &cfg, 8);
        assert_eq!(a.best_cost, 0.0);
        let b = sa_optimize(&p, &cfg, 8);
        assert_eq!(a.records, b.records);
    }
}
