//! QBO, simulated annealing and simulated quantum annealing on one random
//! instance, all starting from the nearest-neighbour tour.
//!
//! `cargo run --release --example compare_solvers -- [cities] [iters] [seeds]`

use qopt::solvers::{run, Algorithm, Problem, SolverConfig};
use qopt::tsp::{generate_instance, TspProblem};

fn main() -> qopt::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let cities = args.first().copied().unwrap_or(100) as usize;
    let iters = args.get(1).copied().unwrap_or(200_000);
    let seeds = args.get(2).copied().unwrap_or(10);

    let inst = generate_instance(cities, 200.0, 42)?;
    let problem = TspProblem::from_nn(&inst)?;
    let nn = problem.evaluate(&problem.initial());
    let cfg = SolverConfig::with_iters(iters);
    println!("{cities} cities, {iters} iterations, {seeds} seeds; nearest neighbour {nn:.2}");

    for alg in [Algorithm::Sa, Algorithm::Qa, Algorithm::Qbo] {
        let finals: Vec<f64> = (0..seeds).map(|s| run(alg, &problem, &cfg, s).best_cost).collect();
        let mean = finals.iter().sum::<f64>() / finals.len() as f64;
        let best = finals.iter().copied().fold(f64::INFINITY, f64::min);
        println!("{alg:>4}: mean {mean:9.2}  best {best:9.2}  improvement {:6.2}%", 100.0 * (nn - mean) / nn);
    }

    let tr = run(Algorithm::Qbo, &problem, &cfg, 0);
    let uphill = tr
        .records
        .windows(2)
        .filter(|w| w[1].accepted && w[1].current_cost > w[0].current_cost)
        .count();
    println!(
        "qbo seed 0: {} acceptances, {uphill} of them uphill ties, final h = {}",
        tr.acceptances().count(),
        tr.records.last().map_or(0, |r| r.h_exp)
    );
    Ok(())
}
