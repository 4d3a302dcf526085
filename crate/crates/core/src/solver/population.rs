use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::problem::{Evaluation, Problem};
use crate::solver::GaConfig;

/// A design and everything computed for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub x: Vec<f64>,
    pub evaluation: Evaluation,
}

impl Individual {
    pub fn feasible(&self) -> bool {
        self.evaluation.feasible
    }

    pub fn violation(&self) -> f64 {
        self.evaluation.violation
    }

    /// Preference row, present only for feasible designs.
    pub fn preferences(&self) -> Option<&[f64]> {
        if self.feasible() {
            self.evaluation.preferences.as_deref()
        } else {
            None
        }
    }
}

/// Seeds first, verbatim after clipping, then uniform samples.
///
/// Seeds outside the bounds are clipped (and integer genes rounded) with a
/// warning; seeds beyond the population size are dropped with a warning.
pub fn initialize_population<R: Rng + ?Sized>(
    problem: &Problem,
    seeds: &[Vec<f64>],
    config: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>, SolverError> {
    let n = problem.dimension();
    if let Some((index, s)) = seeds.iter().enumerate().find(|(_, s)| s.len() != n) {
        return Err(SolverError::SeedDimension { index, expected: n, found: s.len() });
    }
    if seeds.len() > config.population_size {
        log::warn!(
            "{} seeds given for a population of {}; the rest are ignored",
            seeds.len(),
            config.population_size
        );
    }
    let mut out = Vec::with_capacity(config.population_size);
    for (index, seed) in seeds.iter().take(config.population_size).enumerate() {
        let mut x = seed.clone();
        problem.clip(&mut x);
        if x != *seed {
            log::warn!("seed {index} was outside the design space and has been clipped to {x:?}");
        }
        out.push(x);
    }
    while out.len() < config.population_size {
        out.push(problem.variables().iter().map(|v| v.sample(rng)).collect());
    }
    Ok(out)
}

pub fn evaluate_population(problem: &Problem, xs: Vec<Vec<f64>>) -> Result<Vec<Individual>, SolverError> {
    xs.into_iter()
        .map(|x| {
            let evaluation = problem.evaluate(&x)?;
            Ok(Individual { x, evaluation })
        })
        .collect()
}
