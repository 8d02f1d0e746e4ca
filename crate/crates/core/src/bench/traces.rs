use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::{Algorithm, RunTrace};

/// Column order of every trace CSV.
pub const TRACE_COLUMNS: [&str; 10] = [
    "run_id",
    "algorithm",
    "seed",
    "n_cities",
    "iter",
    "best_cost",
    "current_cost",
    "h_exp",
    "accepted",
    "wall_ms",
];

pub const SUMMARY_COLUMNS: [&str; 6] = [
    "n_cities",
    "algorithm",
    "mean_final_cost",
    "best_final_cost",
    "improvement_pct",
    "n_runs",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub run_id: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub n_cities: usize,
    pub iter: u64,
    pub best_cost: f64,
    pub current_cost: f64,
    pub h_exp: u32,
    pub accepted: bool,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n_cities: usize,
    pub algorithm: Algorithm,
    pub mean_final_cost: f64,
    pub best_final_cost: f64,
    pub improvement_pct: f64,
    pub n_runs: usize,
}

/// Final best cost of one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunFinal {
    pub n_cities: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub final_cost: f64,
}

pub fn run_id(n_cities: usize, algorithm: Algorithm, seed: u64) -> String {
    format!("n{n_cities}-{algorithm}-s{seed}")
}

pub fn trace_rows<S>(trace: &RunTrace<S>, n_cities: usize, wall_time: bool) -> Vec<TraceRow> {
    let id = run_id(n_cities, trace.algorithm, trace.seed);
    trace
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| TraceRow {
            run_id: id.clone(),
            algorithm: trace.algorithm,
            seed: trace.seed,
            n_cities,
            iter: r.iter,
            best_cost: r.best_cost,
            current_cost: r.current_cost,
            h_exp: r.h_exp,
            accepted: r.accepted,
            wall_ms: if wall_time {
                trace.record_ms.get(i).copied().unwrap_or(0.0)
            } else {
                0.0
            },
        })
        .collect()
}

pub fn write_trace_csv(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(f);
    if rows.is_empty() {
        w.write_record(TRACE_COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn schema(path: &Path, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path, columns: &[&str]) -> Result<Vec<T>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(f);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(columns.iter().copied()) {
        return Err(schema(
            path,
            format!("expected columns {}, found {}", columns.join(","), headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| schema(path, format!("row {}: {e}", i + 2))))
        .collect()
}

/// Reads one run's trace, checking the column order and that the file holds
/// a single run with increasing iterations.
pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let rows: Vec<TraceRow> = read_rows(path, &TRACE_COLUMNS)?;
    let first = rows.first().ok_or_else(|| schema(path, "trace has no rows"))?;
    for (i, r) in rows.iter().enumerate() {
        if r.run_id != first.run_id {
            return Err(schema(path, format!("row {}: mixes runs {} and {}", i + 2, first.run_id, r.run_id)));
        }
        if i > 0 && r.iter <= rows[i - 1].iter {
            return Err(schema(path, format!("row {}: iterations not increasing", i + 2)));
        }
    }
    Ok(rows)
}

pub fn write_summary_csv(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(f);
    if rows.is_empty() {
        w.write_record(SUMMARY_COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    read_rows(path, &SUMMARY_COLUMNS)
}

/// Aggregates final costs per `(n_cities, algorithm)`: mean and minimum over
/// seeds (summed in seed order), improvement against the `nn` run of the
/// same city count.
pub fn summarize_runs(runs: &[RunFinal]) -> Result<Vec<SummaryRow>> {
    let mut groups: BTreeMap<(usize, Algorithm), Vec<(u64, f64)>> = BTreeMap::new();
    for r in runs {
        groups
            .entry((r.n_cities, r.algorithm))
            .or_default()
            .push((r.seed, r.final_cost));
    }
    let mut out = Vec::with_capacity(groups.len());
    for ((n, alg), mut finals) in groups.iter().map(|(k, v)| (*k, v.clone())) {
        finals.sort_by_key(|&(seed, _)| seed);
        let nn = groups
            .get(&(n, Algorithm::Nn))
            .and_then(|v| v.first())
            .map(|&(_, c)| c)
            .ok_or_else(|| Error::InvalidArgument(format!("no nn run for {n} cities")))?;
        let mean = mean_of(&finals);
        let best = finals.iter().map(|&(_, c)| c).fold(f64::INFINITY, f64::min);
        out.push(SummaryRow {
            n_cities: n,
            algorithm: alg,
            mean_final_cost: mean,
            best_final_cost: best,
            improvement_pct: 100.0 * (nn - mean) / nn,
            n_runs: finals.len(),
        });
    }
    Ok(out)
}

fn mean_of(finals: &[(u64, f64)]) -> f64 {
    finals.iter().map(|&(_, c)| c).sum::<f64>() / finals.len() as f64
}

/// [`summarize_runs`] over trace files; each file's last `best_cost` is the
/// run's final cost.
pub fn summarize(paths: &[PathBuf]) -> Result<Vec<SummaryRow>> {
    let mut runs = Vec::with_capacity(paths.len());
    for p in paths {
        let rows = read_trace_csv(p)?;
        let last = rows.last().expect("read_trace_csv rejects empty traces");
        runs.push(RunFinal {
            n_cities: last.n_cities,
            algorithm: last.algorithm,
            seed: last.seed,
            final_cost: last.best_cost,
        });
    }
    summarize_runs(&runs).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::Schema {
            path: paths.first().cloned().unwrap_or_default(),
            message: m,
        },
        other => other,
    })
}
