//! Analysis of infinite products of row-stochastic matrices with positive
//! diagonals.
//!
//! A sequence `A(0), A(1), ...` drives two processes: the consensus process
//! `x(t) = A(t-1) ... A(0) x(0)` (backward products) and the Markov process
//! `p(t) = p(0) A(0) ... A(t-1)` (forward products). With positive diagonals
//! the zero pattern of an accumulation can only grow, which lets the crate
//!
//! - compute communicating classes and the block lower triangular
//!   Gantmacher form of a pattern ([`structure`]),
//! - cut an accumulation into windows sharing one saturated pattern
//!   ([`accumulation`]),
//! - check whether the window positive minima support convergence of every
//!   essential block to a consensus matrix, and measure how close a finite
//!   horizon gets ([`analysis`]),
//! - simulate both processes ([`processes`]) on stored or generated
//!   sequences ([`generators`]).
//!
//! ```
//! use stochprod::{check_theorem, MatrixSequence, StochasticMatrix, TheoremOptions};
//!
//! let a = StochasticMatrix::from_rows(vec![
//!     vec![1.0, 0.0, 0.0],
//!     vec![0.5, 0.5, 0.0],
//!     vec![0.2, 0.3, 0.5],
//! ])?;
//! let seq = MatrixSequence::constant(a, 200)?;
//! let report = check_theorem(&seq, &TheoremOptions::new(200))?;
//! assert_eq!(report.classes.essential_classes(), &[vec![0]]);
//! assert!(report.conclusion_verified);
//! # Ok::<(), stochprod::Error>(())
//! ```
//!
//! Indices are 0-based throughout.

pub mod accumulation;
pub mod analysis;
pub mod cli;
pub mod error;
pub mod generators;
pub mod matrix;
pub mod processes;
pub mod structure;

pub use accumulation::{
    accumulate, segment, segment_gantmacher, Accumulation, Direction, MatrixSequence, Segmentation,
};
pub use analysis::{
    check_theorem, classify_schedule, hypothesis_from_uniform_bound, series_partial_sum,
    GapSchedule, SeriesClass, TheoremOptions, TheoremReport,
};
pub use error::{Error, Result};
pub use generators::{generate, GeneratorKind, GeneratorSpec};
pub use matrix::{StochasticMatrix, Tolerances, ZeroPattern, EPS_CONS, EPS_POS, EPS_ROW};
pub use processes::{
    consensus_step, markov_step, run_consensus, run_markov, weak_ergodicity_estimate,
    ClusterReport, RunOptions,
};
pub use structure::{
    communication_classes, gantmacher_form, is_type_symmetric, ClassPartition, GantmacherForm,
};
