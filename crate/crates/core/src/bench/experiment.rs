use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::svg::{cost_chart, mean_curve, sample_iters, Series};
use super::traces::{run_id, summarize, trace_rows, write_summary_csv, write_trace_csv, SummaryRow, TraceRow};
use crate::error::{Error, Result};
use crate::solvers::{run, Algorithm};
use crate::tsp::{generate_instance, TspInstance, TspProblem};

/// Environment fallback for the worker count.
pub const THREADS_ENV: &str = "QOPT_THREADS";

const PLOT_SAMPLES: usize = 400;

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub summary: Vec<SummaryRow>,
    pub summary_path: PathBuf,
    pub trace_paths: Vec<PathBuf>,
    pub plot_paths: Vec<PathBuf>,
    pub instance_paths: Vec<PathBuf>,
}

/// `flag`, else `QOPT_THREADS`, else the number of available cores.
pub fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return if n == 0 {
            Err(Error::InvalidArgument("--threads must be >= 1".into()))
        } else {
            Ok(n)
        };
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn trace_dir(out: &Path) -> PathBuf {
    out.join("traces")
}

pub fn summary_path(out: &Path) -> PathBuf {
    out.join("summary.csv")
}

fn mkdir(p: &Path) -> Result<()> {
    std::fs::create_dir_all(p).map_err(|e| Error::io(p, e))
}

struct Job {
    city: usize,
    algorithm: Algorithm,
    seed: u64,
}

/// Runs every algorithm on one shared instance per city count, all from the
/// same nearest-neighbour tour, and writes
///
/// * `instances/n{N}.txt`
/// * `traces/{run_id}.csv`, one per run
/// * `summary.csv`, built from the trace files just written
/// * `plots/cost_n{N}.svg`
///
/// under `cfg.output_dir`. The `nn` run of each city count carries the
/// instance seed.
pub fn run_experiment(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentOutput> {
    let threads = resolve_threads(threads)?;
    let out = &cfg.output_dir;
    let inst_dir = out.join("instances");
    let plot_dir = out.join("plots");
    let tdir = trace_dir(out);
    for d in [&inst_dir, &plot_dir, &tdir] {
        mkdir(d)?;
    }

    let instances: Vec<TspInstance> = cfg
        .cities
        .iter()
        .map(|&n| generate_instance(n, cfg.range, cfg.instance_seed))
        .collect::<Result<_>>()?;
    let mut instance_paths = Vec::new();
    for inst in &instances {
        let p = inst_dir.join(format!("n{}.txt", inst.len()));
        inst.save(&p)?;
        instance_paths.push(p);
    }
    let problems: Vec<TspProblem<'_>> = instances.iter().map(TspProblem::from_nn).collect::<Result<_>>()?;

    let algorithms = cfg.run_list();
    let mut jobs = Vec::new();
    for city in 0..instances.len() {
        for &algorithm in &algorithms {
            if algorithm == Algorithm::Nn {
                jobs.push(Job {
                    city,
                    algorithm,
                    seed: cfg.instance_seed,
                });
            } else {
                jobs.extend(cfg.run_seeds.iter().map(|&seed| Job { city, algorithm, seed }));
            }
        }
    }

    let solver = cfg.solver_config();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {threads} workers: {e}")))?;
    info!("running {} jobs on {threads} threads", jobs.len());
    let results: Vec<Vec<TraceRow>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let problem = &problems[job.city];
                let trace = run(job.algorithm, problem, &solver, job.seed);
                info!(
                    "{} finished: best {:.3} in {:?}",
                    run_id(problem.instance().len(), job.algorithm, job.seed),
                    trace.best_cost,
                    trace.wall_time
                );
                trace_rows(&trace, problem.instance().len(), cfg.record_wall_time)
            })
            .collect()
    });

    let mut trace_paths = Vec::with_capacity(results.len());
    for rows in &results {
        let p = tdir.join(format!("{}.csv", rows[0].run_id));
        write_trace_csv(&p, rows)?;
        trace_paths.push(p);
    }

    let summary = summarize(&trace_paths)?;
    let spath = summary_path(out);
    write_summary_csv(&spath, &summary)?;

    let samples = sample_iters(cfg.iters, PLOT_SAMPLES, cfg.plot.log_x);
    let mut plot_paths = Vec::new();
    for inst in &instances {
        let n = inst.len();
        let series: Vec<Series> = algorithms
            .iter()
            .map(|&alg| {
                let runs: Vec<Vec<(u64, f64)>> = results
                    .iter()
                    .filter(|rows| rows[0].n_cities == n && rows[0].algorithm == alg)
                    .map(|rows| rows.iter().map(|r| (r.iter, r.best_cost)).collect())
                    .collect();
                Series {
                    algorithm: alg,
                    points: mean_curve(&runs, &samples),
                }
            })
            .collect();
        let p = plot_dir.join(format!("cost_n{n}.svg"));
        let svg = cost_chart(&format!("{n} cities: mean best cost"), &series, cfg.plot.log_x);
        std::fs::write(&p, svg).map_err(|e| Error::io(&p, e))?;
        plot_paths.push(p);
    }

    Ok(ExperimentOutput {
        summary,
        summary_path: spath,
        trace_paths,
        plot_paths,
        instance_paths,
    })
}
