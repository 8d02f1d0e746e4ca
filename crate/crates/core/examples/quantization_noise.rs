//! Is rounding error white noise? Checks a uniform stream and the stream of
//! candidate costs a QBO run on a TSP instance actually sees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qopt::quantizer::QuantConfig;
use qopt::solvers::SolverConfig;
use qopt::statslab::{diff_error_stats, error_stats, grid_error_stats, qbo_candidate_errors, wnh_report};
use qopt::tsp::{generate_instance, TspProblem};

fn main() -> qopt::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f: Vec<f64> = (0..100_000).map(|_| rng.random_range(0.0..1000.0)).collect();
    let grid = QuantConfig::new(2, 4, 0)?;
    let s = error_stats(&f, &grid)?;
    println!("uniform values, Q_p = {}:", grid.qp());
    println!("  mean {:+.2e} (ok: {})", s.mean, s.mean_ok());
    println!("  variance {:.4e} vs 1/(12 Q_p^2) = {:.4e}", s.variance, s.expected_variance);
    println!("  lag-1 autocorrelation {:+.4} (ok: {})", s.lag1_autocorr, s.independence_ok());
    let d = diff_error_stats(&f, &grid)?;
    println!("  successive differences: variance {:.4} grid units^2 (independent errors give {:.4})", d.variance, d.iid_value);

    let inst = generate_instance(100, 200.0, 5)?;
    let p = TspProblem::from_nn(&inst)?;
    let samples = qbo_candidate_errors(&p, &SolverConfig::with_iters(50_000), 3)?;
    let g = grid_error_stats(&samples)?;
    println!("\nqbo candidates on 100 cities ({} samples, each on its run's current grid):", g.n);
    println!("  variance {:.4} grid units^2 (white noise 1/12 = {:.4})", g.variance, 1.0 / 12.0);
    println!("  lag-1 autocorrelation {:+.4}", g.lag1_autocorr);

    let report = wnh_report(20_000, 64.0, 1)?;
    println!("\nfull report:");
    report.write_to(std::io::stdout())?;
    Ok(())
}
