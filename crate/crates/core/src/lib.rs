//! Preference-based multi-objective design optimization.
//!
//! Stakeholder preference curves map objective values onto a 0 to 100 scale, a
//! population-relative least-squares aggregator synthesizes one group score
//! per design, and an inter-generational genetic algorithm maximizes that
//! score over a mixed continuous/integer design space. Min-max goal
//! attainment and single-objective runs share the same GA machinery and serve
//! as baselines. Two case models (a rail level-crossing transition zone and a
//! floating-wind installation plan) ship as registered hooks.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the CLI and the
//! HTTP service live in the `odesys` crate.

#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod cases;
pub mod error;
pub mod hooks;
mod math;
pub mod pfm;
pub mod problem;
pub mod solver;

pub use error::{
    AggregationError, CurveError, EvaluationError, HookError, ProblemError, SolverError,
    WeightError,
};
pub use hooks::{HookContext, HookEnv, HookRegistry};
pub use pfm::{aggregate, rank, AggregationResult, Aggregator, PreferenceCurve, ScoreMatrix, WeightSet};
pub use problem::{DesignVariable, DesignVector, Evaluation, Problem, ProblemSpec, VariableKind};
pub use solver::{run_imap, GaConfig, RunResult};
