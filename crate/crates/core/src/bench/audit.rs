use std::cmp::Ordering;
use std::fmt;
use std::path::{Path, PathBuf};

use super::experiment::{summary_path, trace_dir};
use super::traces::{read_summary_csv, read_trace_csv, summarize, TraceRow};
use crate::error::{Error, Result};
use crate::quantizer::{compare, quantize, QuantConfig};
use crate::solvers::Algorithm;

/// Findings for one trace.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceAudit {
    pub acceptances: u64,
    /// Accepted moves whose raw cost went up (equal quantized levels).
    pub uphill_acceptances: u64,
    pub problems: Vec<String>,
}

/// Replays a QBO trace: `h_exp` never decreases, and every accepted record
/// is no worse than its predecessor when both are quantized on the
/// predecessor's grid. The grid's `eta` comes from the first record. Other
/// algorithms only get the best-cost monotonicity check.
pub fn audit_trace(rows: &[TraceRow], base: u32) -> Result<TraceAudit> {
    let mut out = TraceAudit::default();
    let Some(first) = rows.first() else {
        return Ok(out);
    };
    let who = &first.run_id;
    for w in rows.windows(2) {
        if w[1].best_cost > w[0].best_cost {
            out.problems.push(format!("{who} iter {}: best cost increased", w[1].iter));
        }
    }
    if first.algorithm != Algorithm::Qbo {
        return Ok(out);
    }
    let root = QuantConfig::for_initial_value(first.current_cost, base)?;
    for w in rows.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        if cur.h_exp < prev.h_exp {
            out.problems.push(format!("{who} iter {}: h_exp decreased {} -> {}", cur.iter, prev.h_exp, cur.h_exp));
        }
        if !cur.accepted {
            continue;
        }
        out.acceptances += 1;
        let grid = root.with_h_exp(prev.h_exp)?;
        let cand = quantize(cur.current_cost, &grid)?;
        let inc = quantize(prev.current_cost, &grid)?;
        if compare(&cand, &inc)? == Ordering::Greater {
            out.problems.push(format!(
                "{who} iter {}: accepted level {} above incumbent level {}",
                cur.iter,
                cand.level(),
                inc.level()
            ));
        }
        if cur.current_cost > prev.current_cost {
            out.uphill_acceptances += 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub traces: usize,
    pub qbo_traces: usize,
    pub acceptances: u64,
    pub uphill_acceptances: u64,
    /// QBO runs with at least one uphill acceptance.
    pub runs_with_uphill: usize,
    pub summary_rows: usize,
    pub problems: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "traces checked:        {}", self.traces)?;
        writeln!(f, "qbo traces:            {}", self.qbo_traces)?;
        writeln!(f, "qbo acceptances:       {}", self.acceptances)?;
        writeln!(
            f,
            "uphill acceptances:    {} (in {} runs)",
            self.uphill_acceptances, self.runs_with_uphill
        )?;
        writeln!(f, "summary rows checked:  {}", self.summary_rows)?;
        if self.problems.is_empty() {
            write!(f, "result:                clean")
        } else {
            writeln!(f, "problems:              {}", self.problems.len())?;
            for p in &self.problems {
                writeln!(f, "  {p}")?;
            }
            write!(f, "result:                FAILED")
        }
    }
}

/// Trace CSVs in `dir`, sorted by file name.
pub fn trace_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Audits every trace under `out/traces` and checks that `out/summary.csv`
/// matches a fresh summary of those traces exactly.
pub fn audit_output(out: &Path, base: u32) -> Result<AuditReport> {
    let paths = trace_files(&trace_dir(out))?;
    let mut report = AuditReport::default();
    for p in &paths {
        let rows = read_trace_csv(p)?;
        let a = audit_trace(&rows, base)?;
        report.traces += 1;
        if rows[0].algorithm == Algorithm::Qbo {
            report.qbo_traces += 1;
        }
        report.acceptances += a.acceptances;
        report.uphill_acceptances += a.uphill_acceptances;
        report.runs_with_uphill += (a.uphill_acceptances > 0) as usize;
        report.problems.extend(a.problems);
    }

    let stored = read_summary_csv(&summary_path(out))?;
    let fresh = summarize(&paths)?;
    report.summary_rows = stored.len();
    if stored.len() != fresh.len() {
        report
            .problems
            .push(format!("summary has {} rows, traces give {}", stored.len(), fresh.len()));
    }
    for (s, f) in stored.iter().zip(&fresh) {
        if s != f {
            report.problems.push(format!(
                "summary row n={} {} does not match its traces: stored {:?}, recomputed {:?}",
                s.n_cities, s.algorithm, s, f
            ));
        }
        let nn = fresh
            .iter()
            .find(|r| r.n_cities == s.n_cities && r.algorithm == Algorithm::Nn)
            .map(|r| r.mean_final_cost);
        if let Some(nn) = nn {
            if s.improvement_pct != 100.0 * (nn - s.mean_final_cost) / nn {
                report.problems.push(format!(
                    "summary row n={} {}: improvement_pct inconsistent with nn cost",
                    s.n_cities, s.algorithm
                ));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::traces::run_id;

    fn row(iter: u64, cost: f64, best: f64, h: u32, accepted: bool) -> TraceRow {
        TraceRow {
            run_id: run_id(4, Algorithm::Qbo, 0),
            algorithm: Algorithm::Qbo,
            seed: 0,
            n_cities: 4,
            iter,
            best_cost: best,
            current_cost: cost,
            h_exp: h,
            accepted,
            wall_ms: 0.0,
        }
    }

    #[test]
    fn tie_uphill_is_counted_not_flagged() {
        // f0 = 6 gives eta = 2^-2, so the first grid has spacing 4
        let rows = [row(0, 6.0, 6.0, 0, false), row(1, 6.5, 6.0, 1, true), row(2, 5.0, 5.0, 2, true)];
        let a = audit_trace(&rows, 2).unwrap();
        assert_eq!(a.acceptances, 2);
        assert_eq!(a.uphill_acceptances, 1);
        assert!(a.problems.is_empty(), "{:?}", a.problems);
    }

    #[test]
    fn bad_acceptance_and_h_drop_are_flagged() {
        let rows = [row(0, 6.0, 6.0, 3, false), row(1, 7.0, 6.0, 4, true), row(2, 7.0, 6.0, 2, false)];
        let a = audit_trace(&rows, 2).unwrap();
        assert_eq!(a.problems.len(), 2, "{:?}", a.problems);
    }
}
