//! Langevin dynamics versus QBO on a tilted double well, where the shallow
//! basin on the right traps plain gradient descent.

use qopt::schedules::ScheduleSpec;
use qopt::solvers::SolverConfig;
use qopt::statslab::{global_basin, hitting_rate, langevin_simulate, HitOptimizer, Landscape, NoiseSchedule, SdeParams};

fn main() -> qopt::Result<()> {
    let land = Landscape::double_well();
    let basin = global_basin(&land, 100_001)?;
    println!(
        "global basin [{:.3}, {:.3}] covers {:.1}% of [{}, {}]",
        basin.lo,
        basin.hi,
        100.0 * basin.width() / land.width(),
        land.lo,
        land.hi
    );

    let grad = |x: &[f64], g: &mut [f64]| g[0] = 4.0 * x[0].powi(3) - 4.0 * x[0] + 0.3;
    let path = langevin_simulate(
        &SdeParams {
            grad,
            c_q: 1.0,
            noise: NoiseSchedule::Log { c_o: 2.0 },
            dt: 0.01,
            steps: 10_000,
            x0: vec![1.0],
            guard_radius: 10.0,
            record_every: 2_000,
        },
        7,
    )?;
    println!("\none path from the shallow well, log noise c_o = 2:");
    for (t, x) in path.times.iter().zip(&path.states) {
        println!("  t = {t:>5.0}  x = {:+.3}", x[0]);
    }

    let trials = 400;
    let langevin = |noise, c_q| HitOptimizer::Langevin {
        noise,
        c_q,
        dt: 0.01,
        steps: 10_000,
    };
    let runs = [
        ("gradient descent", langevin(NoiseSchedule::Constant(0.0), 1.0)),
        ("constant noise 0.05", langevin(NoiseSchedule::Constant(0.05), 1.0 / 3.0)),
        ("log noise c_o = 1", langevin(NoiseSchedule::Log { c_o: 1.0 }, 1.0 / 3.0)),
        ("log noise c_o = 2", langevin(NoiseSchedule::Log { c_o: 2.0 }, 1.0)),
        (
            "qbo, log schedule",
            HitOptimizer::Qbo(SolverConfig {
                schedule: ScheduleSpec::log(),
                ..SolverConfig::with_iters(2_000)
            }),
        ),
    ];
    println!("\nfraction of {trials} uniform starts ending in the global basin:");
    for (name, opt) in &runs {
        println!("  {name:<20} {:.3}", hitting_rate(&land, opt, trials, 3)?);
    }
    Ok(())
}
