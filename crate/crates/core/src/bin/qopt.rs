use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qopt::bench::{audit_output, run_experiment, ExperimentConfig};
use qopt::quantizer::{quantize, QuantConfig};
use qopt::solvers::brute_force_tsp;
use qopt::statslab::{sde_report, wnh_report, Report, SdeConfig};
use qopt::tsp::TspInstance;
use qopt::Error;

#[derive(Parser)]
#[command(name = "qopt", version, about = "Quantized optimization benchmarks and statistics")]
struct Cli {
    /// Seed for the statistics commands; overrides `instance_seed` for `bench run`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (bench) or report CSV path (stats).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; falls back to QOPT_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand)]
enum Group {
    /// TSP benchmark runs and tools.
    Bench {
        #[command(subcommand)]
        cmd: BenchCmd,
    },
    /// Quantization-noise and SDE statistics.
    Stats {
        #[command(subcommand)]
        cmd: StatsCmd,
    },
    /// Small-instance TSP tools.
    Tsp {
        #[command(subcommand)]
        cmd: TspCmd,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Run an experiment described by a TOML config.
    Run {
        /// Experiment config (TOML).
        #[arg(long)]
        config: PathBuf,
    },
    /// Quantize one value.
    Quantize {
        /// Objective value to quantize.
        #[arg(long = "f", allow_negative_numbers = true)]
        f: f64,
        /// Grid base b >= 2.
        #[arg(long)]
        base: u32,
        /// Resolution exponent h.
        #[arg(long)]
        h: u32,
        /// Exponent of eta in the given base.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        eta_pow: i32,
    },
    /// Replay the traces of a finished experiment and check its summary.
    Audit {
        /// Config of the experiment whose output directory is audited.
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum StatsCmd {
    /// Rounding-error statistics of uniform samples.
    Wnh {
        /// Number of uniform samples (at least 10000).
        #[arg(long)]
        n: usize,
        /// Grid resolution Q_p; must be a power of two.
        #[arg(long)]
        qp: f64,
    },
    /// Langevin and hitting-rate experiments.
    Sde {
        /// SDE lab config (TOML).
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum TspCmd {
    /// Exact optimum of a small instance file.
    Brute {
        /// Instance file: city count, then one `x y` line per city.
        #[arg(long)]
        instance: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 1 })
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.group {
        Group::Bench { cmd } => match cmd {
            BenchCmd::Run { config } => {
                let mut cfg = ExperimentConfig::load(&config)?;
                if let Some(out) = cli.out {
                    cfg.output_dir = out;
                }
                if let Some(seed) = cli.seed {
                    cfg.instance_seed = seed;
                }
                let res = run_experiment(&cfg, cli.threads)?;
                println!("n_cities algorithm mean_final_cost best_final_cost improvement_pct n_runs");
                for r in &res.summary {
                    println!(
                        "{} {} {:.3} {:.3} {:.2} {}",
                        r.n_cities, r.algorithm, r.mean_final_cost, r.best_final_cost, r.improvement_pct, r.n_runs
                    );
                }
                println!("summary: {}", res.summary_path.display());
                for p in &res.plot_paths {
                    println!("plot: {}", p.display());
                }
                Ok(())
            }
            BenchCmd::Quantize { f, base, h, eta_pow } => {
                let q = quantize(f, &QuantConfig::new(base, h, eta_pow)?)?;
                println!("level {}", q.level());
                println!("value {:?}", q.value());
                Ok(())
            }
            BenchCmd::Audit { config } => {
                let cfg = ExperimentConfig::load(&config)?;
                let dir = cli.out.unwrap_or(cfg.output_dir);
                let report = audit_output(&dir, cfg.qbo.base)?;
                println!("{report}");
                if report.is_clean() {
                    Ok(())
                } else {
                    Err(Error::AuditFailed(report.problems.len()))
                }
            }
        },
        Group::Stats { cmd } => {
            let seed = cli.seed.unwrap_or(0);
            let report = match cmd {
                StatsCmd::Wnh { n, qp } => wnh_report(n, qp, seed)?,
                StatsCmd::Sde { config } => sde_report(&SdeConfig::load(&config)?, seed)?,
            };
            print_report(&report);
            if let Some(out) = cli.out {
                report.save(&out)?;
            }
            Ok(())
        }
        Group::Tsp { cmd } => match cmd {
            TspCmd::Brute { instance } => brute(&instance),
        },
    }
}

fn brute(path: &Path) -> Result<(), Error> {
    let inst = TspInstance::load(path)?;
    let (tour, cost) = brute_force_tsp(&inst)?;
    println!("cost {cost}");
    let order: Vec<String> = tour.order().iter().map(|c| c.to_string()).collect();
    println!("tour {}", order.join(" "));
    Ok(())
}

fn print_report(r: &Report) {
    for row in &r.rows {
        println!(
            "{} expected={:.6} observed={:.6} n={} {}",
            row.statistic,
            row.expected,
            row.observed,
            row.n,
            if row.pass { "pass" } else { "FAIL" }
        );
    }
}
