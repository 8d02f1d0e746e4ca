//! Quantization-based global optimization.
//!
//! The optimizer in [`solvers::qbo_optimize`] runs a random search that
//! compares objective values on a grid whose resolution only ever grows.
//! Ties on the coarse grid let the search climb out of local minima early
//! and the refinement makes it a strict descent late. Simulated annealing
//! and path-integral quantum annealing share the same problem interface for
//! comparison, [`tsp`] provides the benchmark problem, [`statslab`] checks
//! the statistical behaviour of the quantization error, and [`bench`] runs
//! whole experiments to CSV and SVG.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod quantizer;
pub mod schedules;
pub mod solvers;
pub mod statslab;
pub mod tsp;

pub use error::{Error, Result};
