use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sa::metropolis_accept;
use super::{Algorithm, Recorder, ReplicaProblem, RunTrace, SolverConfig, TraceRecord};

const GAMMA_END: f64 = 1e-8;

/// Inter-replica coupling `J(t) = -(P T / 2) ln tanh(gamma / (P T))`.
pub fn coupling_strength(gamma: f64, slices: usize, temp: f64) -> f64 {
    let pt = slices as f64 * temp;
    -(pt / 2.0) * (gamma / pt).tanh().ln()
}

/// Path-integral simulated quantum annealing.
///
/// `qa_slices` replicas start from the problem's initial state and sit on a
/// ring. Each sweep gives every replica one Metropolis step on
/// `cost + J(t) * (d(prev) + d(next))` at temperature `P * qa_t`, where `d`
/// counts differing positions against the neighbouring replicas. The
/// transverse field decays linearly from `qa_gamma0` to `1e-8`.
///
/// `max_iters` counts single-replica steps, so the evaluation budget matches
/// the other solvers; the trace follows the best replica.
pub fn qa_optimize<P: ReplicaProblem>(problem: &P, cfg: &SolverConfig, seed: u64) -> RunTrace<P::State> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slices = cfg.qa_slices.max(1);
    let pt = slices as f64 * cfg.qa_t;

    let init = problem.initial();
    let init_cost = problem.evaluate(&init);
    let mut replicas = vec![init.clone(); slices];
    let mut costs = vec![init_cost; slices];
    let mut best_state = init;
    let mut best_cost = init_cost;
    let mut since_best = 0u64;

    let mut rec = Recorder::new(cfg);
    let first = TraceRecord {
        iter: 0,
        best_cost,
        current_cost: init_cost,
        h_exp: 0,
        accepted: false,
    };
    rec.push(first, true);
    let mut last = first;

    let sweeps = cfg.max_iters.div_ceil(slices as u64);
    let mut t = 0u64;
    'sweeps: for s in 0..sweeps {
        let frac = if sweeps > 1 {
            s as f64 / (sweeps - 1) as f64
        } else {
            1.0
        };
        let gamma = cfg.qa_gamma0 + (GAMMA_END - cfg.qa_gamma0) * frac;
        let coupling = coupling_strength(gamma, slices, cfg.qa_t);

        for k in 0..slices {
            if t >= cfg.max_iters {
                break 'sweeps;
            }
            t += 1;
            let mv = problem.propose(&replicas[k], &mut rng);
            let cand = problem.candidate_cost(&replicas[k], costs[k], &mv);
            let mut d_change = 0i64;
            if slices > 1 {
                let prev = (k + slices - 1) % slices;
                let next = (k + 1) % slices;
                d_change += problem.distance_change(&replicas[k], &mv, &replicas[prev]);
                d_change += problem.distance_change(&replicas[k], &mv, &replicas[next]);
            }
            let mut delta = cand - costs[k];
            if d_change != 0 {
                delta += coupling * d_change as f64;
            }
            let u: f64 = rng.random();
            let accepted = metropolis_accept(delta, pt, u);
            if accepted {
                problem.apply(&mut replicas[k], &mv);
                costs[k] = cand;
                if cand < best_cost {
                    best_cost = cand;
                    best_state.clone_from(&replicas[k]);
                    since_best = 0;
                } else {
                    since_best += 1;
                }
            } else {
                since_best += 1;
            }
            let current = costs.iter().copied().fold(f64::INFINITY, f64::min);
            last = TraceRecord {
                iter: t,
                best_cost,
                current_cost: current,
                h_exp: 0,
                accepted,
            };
            rec.push(last, false);
            if cfg.patience > 0 && since_best >= cfg.patience {
                break 'sweeps;
            }
        }
    }

    let (leader, _) = costs
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &c)| if c < acc.1 { (i, c) } else { acc });
    let (records, record_ms) = rec.finish(last);
    RunTrace {
        algorithm: Algorithm::Qa,
        seed,
        records,
        record_ms,
        final_cost: costs[leader],
        final_state: replicas.swap_remove(leader),
        best_state,
        best_cost,
        iterations: t,
        quant: None,
        h_capped: false,
        overflow_rejections: 0,
        wall_time: started.elapsed(),
    }
}
