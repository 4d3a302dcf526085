use alloc::vec::Vec;

use crate::error::SolverError;
use crate::pfm::MAX_SCORE;
use crate::problem::Problem;
use crate::solver::{run_scalar, GaConfig, RunResult};

/// Largest weighted shortfall from full preference: `max_c w_c (100 - P_c)`.
pub fn minmax_value(weights: &[f64], preferences: &[f64]) -> f64 {
    weights
        .iter()
        .zip(preferences)
        .map(|(w, p)| w * (MAX_SCORE - p))
        .fold(0.0, f64::max)
}

/// Goal attainment: minimizes [`minmax_value`] over the feasible designs.
pub fn run_minmax(problem: &Problem, config: &GaConfig, seeds: &[Vec<f64>]) -> Result<RunResult, SolverError> {
    let weights: Vec<f64> = problem.criteria().iter().map(|c| c.weight).collect();
    run_scalar(
        problem,
        config,
        seeds,
        |m| minmax_value(&weights, m.preferences().expect("scalar cost is only taken of feasible members")),
        |_| {},
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_the_worst_weighted_gap() {
        assert_eq!(minmax_value(&[0.5, 0.5], &[100.0, 100.0]), 0.0);
        assert_eq!(minmax_value(&[0.4, 0.4, 0.2], &[90.0, 50.0, 0.0]), 20.0);
        assert_eq!(minmax_value(&[0.25, 0.75], &[0.0, 80.0]), 25.0);
    }
}
