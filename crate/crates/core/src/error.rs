//! Error types shared across the crate.

use alloc::string::String;
use thiserror::Error;

use crate::cases::rail::RailError;
use crate::cases::wind::anchor::AnchorError;
use crate::cases::wind::des::DesError;
use crate::problem::GridError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("a preference curve needs at least 2 knots, got {0}")]
    TooFewKnots(usize),
    #[error("knot {index} is not finite")]
    NotFinite { index: usize },
    #[error("knot abscissae must be strictly increasing (knot {index})")]
    NotIncreasing { index: usize },
    #[error("knot {index} score {score} is outside [0, 100]")]
    ScoreOutOfRange { index: usize, score: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("no stakeholders")]
    Empty,
    #[error("expected {expected} objective-weight rows, got {found}")]
    Shape { expected: usize, found: usize },
    #[error("objective-weight row {stakeholder} has {found} entries, expected {expected}")]
    RowLength {
        stakeholder: usize,
        expected: usize,
        found: usize,
    },
    #[error("weight at ({stakeholder}, {objective}) is negative or not finite")]
    Invalid { stakeholder: usize, objective: usize },
    #[error("stakeholder weights sum to {sum}, expected 1")]
    StakeholderNormalization { sum: f64 },
    #[error("objective weights of stakeholder {stakeholder} sum to {sum}, expected 1")]
    ObjectiveNormalization { stakeholder: usize, sum: f64 },
    #[error("combined weights sum to {sum}, expected 1")]
    CombinedNormalization { sum: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AggregationError {
    #[error("score matrix is not rectangular: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("score matrix has {found} columns but {expected} weights were given")]
    Shape { expected: usize, found: usize },
    #[error("aggregation needs at least 2 alternatives, got {alternatives}")]
    Degenerate { alternatives: usize },
    #[error("score {value} at ({row}, {column}) is outside [0, 100]")]
    ScoreOutOfRange { row: usize, column: usize, value: f64 },
    #[error("criterion weights must be non-negative with a positive sum")]
    InvalidWeights,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvaluationError {
    #[error("design vector has {found} entries, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("variable `{variable}` = {value} is outside its bounds or not integral")]
    OutOfBounds { variable: String, value: f64 },
    #[error("{what} `{name}` evaluated to a non-finite value")]
    NonFinite { what: &'static str, name: String },
    #[error("objective values are not available to this hook")]
    ObjectivesUnavailable,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Rail(#[from] RailError),
    #[error(transparent)]
    Des(#[from] DesError),
    #[error(transparent)]
    Anchor(#[from] AnchorError),
    #[error("hook `{hook}` failed: {message}")]
    Hook { hook: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HookError {
    #[error("unknown hook `{0}`")]
    UnknownHook(String),
    #[error("hook `{hook}` references undeclared performance function `{name}`")]
    UnknownPerformance { hook: String, name: String },
    #[error("hook `{hook}` needs performance function `{name}` to be a tabulated grid")]
    NotAGrid { hook: String, name: String },
    #[error("hook `{hook}` references undeclared objective `{name}`")]
    UnknownObjective { hook: String, name: String },
    #[error("hook `{hook}`: parameter `{name}` is invalid: {message}")]
    InvalidParameter {
        hook: String,
        name: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("variable `{name}`: {message}")]
    Variable { name: String, message: String },
    #[error("duplicate {what} name `{name}`")]
    DuplicateName { what: &'static str, name: String },
    #[error("the problem declares no {0}")]
    Missing(&'static str),
    #[error("performance function `{name}` references unknown variable index {index}")]
    UnknownVariable { name: String, index: usize },
    #[error("stakeholder `{stakeholder}` references unknown objective `{objective}`")]
    UnknownObjective {
        stakeholder: String,
        objective: String,
    },
    #[error("stakeholder `{stakeholder}` has a nonzero weight on `{objective}` but no curve")]
    MissingCurve {
        stakeholder: String,
        objective: String,
    },
    #[error("constraint `{name}`: tolerance and epsilon must be finite and non-negative")]
    InvalidTolerance { name: String },
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Hook(#[from] HookError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("seed {index} has {found} values, expected {expected}")]
    SeedDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("no feasible design was found")]
    NoFeasiblePoint,
    #[error("unknown objective `{0}`")]
    UnknownObjective(String),
    #[error("grid has {points} points, the limit is {limit}")]
    GridTooLarge { points: u128, limit: u128 },
    #[error("comparison needs at least {required} alternatives, got {found}")]
    TooFewAlternatives { required: usize, found: usize },
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
    #[error(transparent)]
    Aggregation(#[from] AggregationError),
}
