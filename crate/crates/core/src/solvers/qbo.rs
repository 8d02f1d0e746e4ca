use std::cmp::Ordering;
use std::time::Instant;

use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, Problem, Recorder, RunTrace, SolverConfig, TraceRecord};
use crate::quantizer::{compare, quantize, QuantConfig};

/// Blind random search with quantized acceptance.
///
/// The candidate and the incumbent are quantized on the same current grid
/// and the candidate wins when its level is less than *or equal to* the
/// incumbent's. Equal levels let the raw objective climb, which is the only
/// source of uphill moves. After each acceptance the schedule may refine the
/// grid and the new incumbent is re-quantized from its raw value.
pub fn qbo_optimize<P: Problem>(problem: &P, cfg: &SolverConfig, seed: u64) -> RunTrace<P::State> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut state = problem.initial();
    let mut cost = problem.evaluate(&state);
    let base_cfg = QuantConfig::for_initial_value(cost, cfg.qbo_base)
        .expect("initial objective must be finite and nonnegative");
    let f_max = cfg
        .f_max
        .or_else(|| problem.value_bound())
        .unwrap_or(cost)
        .max(cost);
    let cap = base_cfg.max_h_exp(f_max);

    let mut h = 0u32;
    let mut grid = base_cfg;
    let mut incumbent = quantize(cost, &grid).expect("initial value fits the coarsest grid");

    let mut best_state = state.clone();
    let mut best_cost = cost;
    let mut since_best = 0u64;
    let mut h_capped = false;
    let mut overflow_rejections = 0u64;

    let mut rec = Recorder::new(cfg);
    let first = TraceRecord {
        iter: 0,
        best_cost,
        current_cost: cost,
        h_exp: h,
        accepted: false,
    };
    rec.push(first, true);
    let mut last = first;
    let mut iterations = 0;

    for t in 1..=cfg.max_iters {
        iterations = t;
        let mv = problem.propose(&state, &mut rng);
        let cand = problem.candidate_cost(&state, cost, &mv);

        let verdict = match quantize(cand, &grid) {
            Ok(q) => Some(compare(&q, &incumbent).expect("same grid")),
            Err(_) => {
                overflow_rejections += 1;
                None
            }
        };
        let accepted = matches!(verdict, Some(Ordering::Less | Ordering::Equal));

        if accepted {
            problem.apply(&mut state, &mv);
            cost = cand;
            let advance = !cfg.strict_improvement_only || verdict == Some(Ordering::Less);
            let step = cfg.schedule.next_h(h, advance, t, cfg.qbo_base, cap);
            if step.capped && !h_capped {
                info!("resolution exponent reached the exactness cap {cap} at iteration {t}");
            }
            h_capped |= step.capped;
            // the incumbent may sit above f_max after coarse tie moves
            let mut next_h = step.h;
            loop {
                let next_grid = base_cfg.with_h_exp(next_h).expect("h within exponent cap");
                match quantize(cost, &next_grid) {
                    Ok(q) => {
                        grid = next_grid;
                        incumbent = q;
                        break;
                    }
                    Err(_) if next_h > h => {
                        h_capped = true;
                        next_h -= 1;
                    }
                    Err(e) => panic!("incumbent no longer quantizable: {e}"),
                }
            }
            h = next_h;
            if cost < best_cost {
                best_cost = cost;
                best_state.clone_from(&state);
                since_best = 0;
            } else {
                since_best += 1;
            }
        } else {
            since_best += 1;
        }

        last = TraceRecord {
            iter: t,
            best_cost,
            current_cost: cost,
            h_exp: h,
            accepted,
        };
        rec.push(last, false);
        if cfg.patience > 0 && since_best >= cfg.patience {
            break;
        }
    }

    let (records, record_ms) = rec.finish(last);
    RunTrace {
        algorithm: Algorithm::Qbo,
        seed,
        records,
        record_ms,
        final_state: state,
        final_cost: cost,
        best_state,
        best_cost,
        iterations,
        quant: Some(base_cfg),
        h_capped,
        overflow_rejections,
        wall_time: started.elapsed(),
    }
}
