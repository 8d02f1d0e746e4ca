//! Benchmark orchestration: configs, trace and summary CSVs, SVG charts and
//! the trace auditor.

mod audit;
mod config;
mod experiment;
mod svg;
mod traces;

pub use audit::{audit_output, audit_trace, trace_files, AuditReport, TraceAudit};
pub use config::{ExperimentConfig, PlotSection, QaSection, QboSection, SaSection};
pub use experiment::{resolve_threads, run_experiment, summary_path, trace_dir, ExperimentOutput, THREADS_ENV};
pub use svg::{cost_chart, mean_curve, sample_iters, Series};
pub use traces::{
    read_summary_csv, read_trace_csv, run_id, summarize, summarize_runs, trace_rows, write_summary_csv,
    write_trace_csv, RunFinal, SummaryRow, TraceRow, SUMMARY_COLUMNS, TRACE_COLUMNS,
};
