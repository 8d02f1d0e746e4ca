//! The set of points at least as good as the quantized incumbent, tracked
//! over a QBO run on the double well.

use qopt::schedules::ScheduleSpec;
use qopt::solvers::{qbo_optimize, SolverConfig};
use qopt::statslab::{sublevel_measure_trace, IntervalProblem, Landscape};

fn main() -> qopt::Result<()> {
    let land = Landscape::double_well();
    let problem = IntervalProblem::new(&land, 1.9);
    let cfg = SolverConfig {
        schedule: ScheduleSpec::log(),
        ..SolverConfig::with_iters(20_000)
    };
    let trace = qbo_optimize(&problem, &cfg, 4);
    let f = |x: f64| land.value(x);
    let points = sublevel_measure_trace(f, (land.lo, land.hi), 100_000, &trace)?;

    println!("{:>7} {:>3} {:>10} {:>10} {:>9}", "iter", "h", "Q_p", "threshold", "measure");
    // ties leave the set unchanged, so print only the points where it moves
    let mut last = f64::NAN;
    for p in &points {
        if p.threshold == last {
            continue;
        }
        last = p.threshold;
        println!("{:>7} {:>3} {:>10} {:>10.4} {:>9.5}", p.iter, p.h_exp, p.qp, p.threshold, p.measure);
    }
    println!("\n{} acceptances in total", points.len() - 1);
    println!("final x = {:.4}, f = {:.6}", trace.best_state, trace.best_cost);
    Ok(())
}
