//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qopt::bench::{audit_output, audit_trace, read_trace_csv, run_experiment, ExperimentConfig, SummaryRow};
use qopt::quantizer::QuantConfig;
use qopt::schedules::ScheduleSpec;
use qopt::solvers::{
    brute_force_tsp, qa_optimize, qbo_optimize, sa_optimize, Algorithm, Problem, SolverConfig,
};
use qopt::statslab::{
    diffusion_variance, error_stats, global_basin, grid_error_stats, hitting_rate, qbo_candidate_errors,
    HitOptimizer, Landscape, NoiseSchedule,
};
use qopt::tsp::{generate_instance, TspProblem};

struct Gate {
    failures: usize,
}

impl Gate {
    fn check(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("[{}] {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn dense_stream(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(0.0..100.0)).collect()
}

fn error_statistics(gate: &mut Gate) {
    let n = 1_000_000;
    let started = Instant::now();
    let mut ok_var = true;
    let mut ok_ind = true;
    let mut lines = Vec::new();
    let mut lags = Vec::new();
    for (k, qp_pow) in [0, 4, 10].into_iter().enumerate() {
        let grid = QuantConfig::new(2, 0, qp_pow).unwrap();
        let s = error_stats(&dense_stream(n, 100 + k as u64), &grid).unwrap();
        ok_var &= s.variance_ok(0.02) && s.mean_ok();
        ok_ind &= s.independence_ok();
        lines.push(format!(
            "Q_p={} var/expected={:.4} |mean|/band={:.3}",
            grid.qp(),
            s.variance / s.expected_variance,
            s.mean.abs() / (3.0 * (s.variance / n as f64).sqrt())
        ));
        lags.push(format!("{:.2e}", s.lag1_autocorr));
    }
    let elapsed = started.elapsed();
    gate.check(
        1,
        "rounding-error mean and variance",
        ok_var && elapsed < Duration::from_secs(5),
        format!("{}; {}", lines.join(", "), secs(elapsed)),
    );

    let inst = generate_instance(100, 200.0, 42).unwrap();
    let p = TspProblem::from_nn(&inst).unwrap();
    let tsp = grid_error_stats(&qbo_candidate_errors(&p, &SolverConfig::default(), 0).unwrap()).unwrap();
    gate.check(
        2,
        "lag-1 independence of dense streams",
        ok_ind,
        format!(
            "r1 = [{}] vs bound {:.2e}; tsp candidate stream r1 = {:.2e} (bound {:.2e}, reported only)",
            lags.join(", "),
            3.0 / (n as f64).sqrt(),
            tsp.lag1_autocorr,
            3.0 / (tsp.n as f64).sqrt()
        ),
    );
}

/// Two states: the start is worth `f0`, every proposal is worth `f1`.
struct TwoPoint {
    f0: f64,
    f1: f64,
}

impl Problem for TwoPoint {
    type State = bool;
    type Move = ();

    fn initial(&self) -> bool {
        false
    }

    fn evaluate(&self, moved: &bool) -> f64 {
        if *moved {
            self.f1
        } else {
            self.f0
        }
    }

    fn propose<R: Rng + ?Sized>(&self, _: &bool, _: &mut R) {}

    fn apply(&self, s: &mut bool, _: &()) {
        *s = true;
    }
}

fn first_candidate_accepted(gate: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = 10_000;
    let mut failures = 0;
    for k in 0..cases {
        let base = if k % 2 == 0 { 2 } else { 10 };
        let f0 = 10f64.powf(rng.random_range(-6.0..6.0));
        let f1 = f0 * rng.random_range(0.0..=1.0);
        let p = TwoPoint { f0, f1 };
        let cfg = SolverConfig {
            qbo_base: base,
            ..SolverConfig::with_iters(1)
        };
        if !qbo_optimize(&p, &cfg, k).records[1].accepted {
            failures += 1;
        }
    }
    gate.check(
        3,
        "first candidate from the supremum state is accepted",
        failures == 0,
        format!("{failures} failures in {cases} cases"),
    );
}

fn small_instance_oracle(gate: &mut Gate) {
    let started = Instant::now();
    let cfg = SolverConfig::with_iters(200_000);
    let (mut qbo, mut sa, mut qa) = (0, 0, 0);
    let total = 50;
    for k in 0..total {
        let inst = generate_instance(5 + (k % 4) as usize, 200.0, 1000 + k).unwrap();
        let (_, opt) = brute_force_tsp(&inst).unwrap();
        let p = TspProblem::from_nn(&inst).unwrap();
        let hit = |c: f64| ((c - opt).abs() < 1e-9) as u32;
        qbo += hit(qbo_optimize(&p, &cfg, k).best_cost);
        sa += hit(sa_optimize(&p, &cfg, k).best_cost);
        qa += hit(qa_optimize(&p, &cfg, k).best_cost);
    }
    let elapsed = started.elapsed();
    let pct = |h: u32| 100.0 * h as f64 / total as f64;
    gate.check(
        4,
        "brute-force optimum on n = 5..8",
        pct(qbo) >= 90.0 && pct(sa) >= 80.0 && pct(qa) >= 80.0 && elapsed < Duration::from_secs(120),
        format!("qbo {qbo}/{total}, sa {sa}/{total}, qa {qa}/{total}; {}", secs(elapsed)),
    );
}

fn row(summary: &[SummaryRow], n: usize, alg: Algorithm) -> &SummaryRow {
    summary.iter().find(|r| r.n_cities == n && r.algorithm == alg).unwrap()
}

const BENCH: &str = "cities = [100, 150, 200]
range = 200.0
instance_seed = 42
run_seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
iters = 200000
algorithms = [\"nn\", \"sa\", \"qa\", \"qbo\"]
";

fn bench_config(out: &Path) -> ExperimentConfig {
    let src = format!("{BENCH}output_dir = \"{}\"\n", out.display());
    ExperimentConfig::from_toml_str(&src, Path::new("acceptance.toml")).unwrap()
}

fn benchmark(gate: &mut Gate) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let cfg = bench_config(&first);
    let started = Instant::now();
    let out = run_experiment(&cfg, None).unwrap();
    let elapsed = started.elapsed();
    let s = &out.summary;

    let mean = |n, a| row(s, n, a).mean_final_cost;
    let q100 = row(s, 100, Algorithm::Qbo);
    gate.check(
        5,
        "100-city ranking and improvement",
        mean(100, Algorithm::Qbo) <= mean(100, Algorithm::Qa)
            && mean(100, Algorithm::Qbo) <= mean(100, Algorithm::Sa)
            && q100.improvement_pct >= 15.0
            && elapsed < Duration::from_secs(600),
        format!(
            "mean qbo {:.2}, sa {:.2}, qa {:.2}, nn {:.2}; qbo improvement {:.2}%; {}",
            mean(100, Algorithm::Qbo),
            mean(100, Algorithm::Sa),
            mean(100, Algorithm::Qa),
            mean(100, Algorithm::Nn),
            q100.improvement_pct,
            secs(elapsed)
        ),
    );

    let mut ok = true;
    let mut parts = Vec::new();
    for n in [100, 150, 200] {
        let q = row(s, n, Algorithm::Qbo);
        let rival = mean(n, Algorithm::Sa).min(mean(n, Algorithm::Qa));
        ok &= q.improvement_pct >= 8.0 && q.mean_final_cost <= rival;
        parts.push(format!(
            "n={n}: qbo {:.2}% ({:.1} vs best rival {:.1})",
            q.improvement_pct, q.mean_final_cost, rival
        ));
    }
    gate.check(6, "improvement and ranking across sizes", ok, parts.join(", "));

    let audit = audit_output(&first, cfg.qbo.base).unwrap();
    gate.check(
        7,
        "QBO traces replay under the auditor",
        audit.is_clean() && audit.qbo_traces == 30,
        format!(
            "{} traces, {} qbo, {} acceptances replayed, {} problems",
            audit.traces,
            audit.qbo_traces,
            audit.acceptances,
            audit.problems.len()
        ),
    );

    let mut uphill = 0;
    let mut runs = 0;
    for p in out.trace_paths.iter().filter(|p| {
        let name = p.file_name().unwrap().to_string_lossy();
        name.starts_with("n100-qbo-")
    }) {
        let a = audit_trace(&read_trace_csv(p).unwrap(), cfg.qbo.base).unwrap();
        uphill += a.uphill_acceptances;
        runs += (a.uphill_acceptances > 0) as u32;
    }
    gate.check(
        8,
        "uphill tie acceptance on 100 cities",
        uphill >= 1,
        format!("{uphill} uphill acceptances in {runs} of 10 runs"),
    );

    (dir, out.summary_path)
}

fn rerun(gate: &mut Gate, dir: &Path, first_summary: &Path) {
    let second = dir.join("second");
    let again = run_experiment(&bench_config(&second), Some(1)).unwrap();
    let a = std::fs::read(first_summary).unwrap();
    let b = std::fs::read(&again.summary_path).unwrap();
    gate.check(
        10,
        "rerun gives a byte-identical summary",
        a == b,
        format!("{} bytes, identical = {}", a.len(), a == b),
    );
}

fn sde_lab(gate: &mut Gate) {
    let started = Instant::now();
    let steps = 200;
    let dt = 0.01;
    let var = diffusion_variance(10_000, steps, dt, 8).unwrap();
    let expect = steps as f64 * dt;

    let land = Landscape::double_well();
    let ratio = global_basin(&land, 100_001).unwrap().width() / land.width();
    let trials = 1000;
    let qbo_cfg = SolverConfig {
        schedule: ScheduleSpec::log(),
        ..SolverConfig::with_iters(2_000)
    };
    let qbo = hitting_rate(&land, &HitOptimizer::Qbo(qbo_cfg), trials, 8).unwrap();
    let descent_opt = HitOptimizer::Langevin {
        noise: NoiseSchedule::Constant(0.0),
        c_q: 1.0 / 3.0,
        dt: 0.01,
        steps: 10_000,
    };
    let descent = hitting_rate(&land, &descent_opt, trials, 8).unwrap();
    let se = (qbo * (1.0 - qbo) / trials as f64 + descent * (1.0 - descent) / trials as f64).sqrt();
    let elapsed = started.elapsed();
    gate.check(
        9,
        "diffusion scaling and double-well hitting rate",
        (var / expect - 1.0).abs() <= 0.05
            && qbo >= 0.95
            && qbo - descent > 3.0 * se
            && elapsed < Duration::from_secs(120),
        format!(
            "var {var:.4} vs {expect:.4}; qbo rate {qbo:.3}, descent {descent:.3} (basin ratio {ratio:.3}, 3 se {:.3}); {}",
            3.0 * se,
            secs(elapsed)
        ),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };
    error_statistics(&mut gate);
    first_candidate_accepted(&mut gate);
    small_instance_oracle(&mut gate);
    let (dir, summary) = benchmark(&mut gate);
    sde_lab(&mut gate);
    rerun(&mut gate, dir.path(), &summary);
    if gate.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", gate.failures);
        ExitCode::FAILURE
    }
}
