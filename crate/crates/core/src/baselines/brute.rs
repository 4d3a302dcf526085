use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::math;
use crate::pfm::AggregationResult;
use crate::problem::Problem;

/// Largest grid [`brute_force_imap`] will enumerate.
pub const MAX_GRID_POINTS: u128 = 1_000_000;

/// Axis values for every design variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Vec<f64>>,
}

impl GridSpec {
    /// Evenly spaced axes from each lower bound. Integer variables always
    /// take every integer in range. The upper bound is included when the
    /// range is a whole number of steps.
    pub fn from_steps(problem: &Problem, steps: &[f64]) -> Self {
        let axes = problem
            .variables()
            .iter()
            .zip(steps)
            .map(|(v, &step)| {
                if v.is_integer() {
                    return (v.lower as i64..=v.upper as i64).map(|i| i as f64).collect();
                }
                let span = v.upper - v.lower;
                if span == 0.0 || step <= 0.0 {
                    return alloc::vec![v.lower];
                }
                let ratio = span / step;
                let whole = math::round(ratio);
                let n = if (ratio - whole).abs() < 1e-9 { whole as usize } else { math::floor(ratio) as usize };
                (0..=n)
                    .map(|i| if i == n && whole as usize == n { v.upper } else { (v.lower + i as f64 * step).min(v.upper) })
                    .collect()
            })
            .collect();
        Self { axes }
    }

    pub fn size(&self) -> u128 {
        self.axes.iter().map(|a| a.len() as u128).product()
    }

    /// Grid points with the last axis varying fastest.
    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let total = self.size() as usize;
        (0..total).map(move |mut k| {
            let mut x = alloc::vec![0.0; self.axes.len()];
            for (d, axis) in self.axes.iter().enumerate().rev() {
                x[d] = axis[k % axis.len()];
                k /= axis.len();
            }
            x
        })
    }
}

/// The feasible grid points aggregated as a single population.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce {
    pub points: Vec<Vec<f64>>,
    pub objectives: Vec<Vec<f64>>,
    pub preferences: Vec<Vec<f64>>,
    pub aggregation: AggregationResult,
    pub argmax: usize,
}

impl BruteForce {
    pub fn scores(&self) -> &[f64] {
        &self.aggregation.aggregated
    }

    pub fn best(&self) -> &[f64] {
        &self.points[self.argmax]
    }
}

pub fn brute_force_imap(problem: &Problem, grid: &GridSpec) -> Result<BruteForce, SolverError> {
    let size = grid.size();
    if size > MAX_GRID_POINTS {
        return Err(SolverError::GridTooLarge { points: size, limit: MAX_GRID_POINTS });
    }
    let mut points = Vec::new();
    let mut objectives = Vec::new();
    let mut preferences = Vec::new();
    for x in grid.points() {
        let e = problem.evaluate(&x)?;
        if e.feasible {
            objectives.push(e.objectives.expect("feasible design has objectives"));
            preferences.push(e.preferences.expect("feasible design has preferences"));
            points.push(x);
        }
    }
    if points.is_empty() {
        return Err(SolverError::NoFeasiblePoint);
    }
    let aggregation = problem.aggregator().aggregate_rows(&preferences)?;
    let argmax = aggregation.ranking[0];
    Ok(BruteForce { points, objectives, preferences, aggregation, argmax })
}
