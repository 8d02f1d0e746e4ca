//! Plugging a new objective into the solvers through the `Problem` trait.
//!
//! The state is a point on a 201 x 201 lattice over `[-5, 5]^2` and the
//! objective is the Rastrigin function, whose many local minima make plain
//! descent stall. Proposals are mostly local steps with an occasional
//! uniform jump.

use rand::Rng;

use qopt::schedules::ScheduleSpec;
use qopt::solvers::{qbo_optimize, sa_optimize, Problem, SolverConfig};

const SIDE: i32 = 100;

struct Rastrigin;

fn coord(i: i32) -> f64 {
    i as f64 * 5.0 / SIDE as f64
}

impl Problem for Rastrigin {
    type State = (i32, i32);
    type Move = (i32, i32);

    fn initial(&self) -> (i32, i32) {
        (SIDE * 9 / 10, -SIDE * 7 / 10)
    }

    fn evaluate(&self, &(i, j): &(i32, i32)) -> f64 {
        [coord(i), coord(j)]
            .iter()
            .map(|x| x * x - 10.0 * (2.0 * std::f64::consts::PI * x).cos() + 10.0)
            .sum()
    }

    fn propose<R: Rng + ?Sized>(&self, &(i, j): &(i32, i32), rng: &mut R) -> (i32, i32) {
        if rng.random_bool(0.1) {
            return (rng.random_range(-SIDE..=SIDE), rng.random_range(-SIDE..=SIDE));
        }
        let step = |v: i32, rng: &mut R| (v + rng.random_range(-8..=8)).clamp(-SIDE, SIDE);
        (step(i, rng), step(j, rng))
    }

    fn apply(&self, s: &mut (i32, i32), mv: &(i32, i32)) {
        *s = *mv;
    }

    fn value_bound(&self) -> Option<f64> {
        Some(81.0)
    }
}

fn main() {
    let p = Rastrigin;
    println!("start value {:.3}", p.evaluate(&p.initial()));
    for (name, cfg) in [
        ("qbo greedy", SolverConfig::with_iters(50_000)),
        (
            "qbo log",
            SolverConfig {
                schedule: ScheduleSpec::log(),
                ..SolverConfig::with_iters(50_000)
            },
        ),
        (
            "sa",
            SolverConfig {
                sa_t0: 10.0,
                ..SolverConfig::with_iters(50_000)
            },
        ),
    ] {
        let finals: Vec<f64> = (0..20)
            .map(|s| {
                if name == "sa" {
                    sa_optimize(&p, &cfg, s).best_cost
                } else {
                    qbo_optimize(&p, &cfg, s).best_cost
                }
            })
            .collect();
        let solved = finals.iter().filter(|&&f| f < 1e-9).count();
        let mean = finals.iter().sum::<f64>() / finals.len() as f64;
        println!("{name:>10}: mean best {mean:7.3}, global minimum in {solved}/20 runs");
    }
}
