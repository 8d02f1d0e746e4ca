//! A small end-to-end benchmark: instances, per-run traces, the summary
//! table, plots, and an audit of everything written.
//!
//! `cargo run --release --example run_benchmark -- [output dir]`

use std::path::PathBuf;

use qopt::bench::{audit_output, run_experiment, ExperimentConfig};

const CONFIG: &str = r#"
cities = [40, 60]
instance_seed = 3
run_seeds = [0, 1, 2, 3]
iters = 30000
plot.log_x = true
"#;

fn main() -> qopt::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qopt-benchmark"));
    let mut cfg = ExperimentConfig::from_toml_str(CONFIG, "inline.toml".as_ref())?;
    cfg.output_dir = out.clone();

    let result = run_experiment(&cfg, None)?;
    println!("{:>6} {:>4} {:>5} {:>10} {:>10} {:>8}", "cities", "alg", "runs", "mean", "best", "improv%");
    for row in &result.summary {
        println!(
            "{:>6} {:>4} {:>5} {:>10.2} {:>10.2} {:>8.2}",
            row.n_cities, row.algorithm.name(), row.n_runs, row.mean_final_cost, row.best_final_cost, row.improvement_pct
        );
    }
    println!("\n{} traces, summary at {}", result.trace_paths.len(), result.summary_path.display());
    for p in &result.plot_paths {
        println!("plot {}", p.display());
    }

    println!("\naudit:\n{}", audit_output(&out, cfg.qbo.base)?);
    Ok(())
}
