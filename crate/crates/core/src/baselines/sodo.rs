use alloc::string::ToString;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::problem::Problem;
use crate::solver::{run_scalar, GaConfig, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Direction implied by the curves on an objective: minimize when the
/// heaviest-weighted curve prefers low values, maximize otherwise. An
/// objective without curves is minimized.
pub fn infer_direction(problem: &Problem, objective: usize) -> Direction {
    problem
        .criteria()
        .iter()
        .filter(|c| c.objective == objective)
        .max_by(|a, b| a.weight.total_cmp(&b.weight))
        .map_or(Direction::Minimize, |c| {
            if c.curve.prefers_low() {
                Direction::Minimize
            } else {
                Direction::Maximize
            }
        })
}

/// Single-objective optimization of one raw objective value.
pub fn run_sodo(
    problem: &Problem,
    objective: &str,
    direction: Option<Direction>,
    config: &GaConfig,
    seeds: &[Vec<f64>],
) -> Result<RunResult, SolverError> {
    let index = problem
        .objective_index(objective)
        .ok_or_else(|| SolverError::UnknownObjective(objective.to_string()))?;
    let sign = match direction.unwrap_or_else(|| infer_direction(problem, index)) {
        Direction::Minimize => 1.0,
        Direction::Maximize => -1.0,
    };
    let mut result = run_scalar(
        problem,
        config,
        seeds,
        |m| sign * m.evaluation.objectives.as_ref().expect("feasible member has objectives")[index],
        |_| {},
    )?;
    result.score = result.objectives[index];
    Ok(result)
}
