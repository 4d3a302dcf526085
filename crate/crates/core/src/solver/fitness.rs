use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::pfm::{Aggregator, MAX_SCORE};
use crate::solver::Individual;

/// Selection fitness. Tiers rank strictly: refined above filtered above
/// feasible scalar above infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tier", content = "value", rename_all = "snake_case")]
pub enum Fitness {
    /// Score from the second aggregation pass.
    Refined(f64),
    /// First-pass score at or below the relevance threshold.
    Filtered(f64),
    /// Cost of a feasible design under a scalar objective; lower is better.
    Scalar(f64),
    /// Total constraint violation; lower is better.
    Infeasible(f64),
}

impl Fitness {
    fn key(self) -> (u8, f64) {
        match self {
            Self::Refined(s) => (3, s),
            Self::Filtered(s) => (2, s),
            Self::Scalar(c) => (1, -c),
            Self::Infeasible(v) => (0, -v),
        }
    }

    /// Ordering where `Greater` means fitter.
    pub fn compare(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
    }
}

/// Fitness of every member of one generation.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationFitness {
    pub fitness: Vec<Fitness>,
    /// Member indices from fittest to least fit, ties by index.
    pub order: Vec<usize>,
    /// Position of each member in `order`.
    pub rank_of: Vec<usize>,
    /// Members that entered the second aggregation pass.
    pub second_pass: Vec<usize>,
    /// First-pass scores of the feasible members, when aggregated.
    pub first_pass: Option<Vec<f64>>,
}

impl GenerationFitness {
    pub fn from_fitness(fitness: Vec<Fitness>) -> Self {
        let mut order: Vec<usize> = (0..fitness.len()).collect();
        order.sort_by(|&a, &b| fitness[b].compare(&fitness[a]));
        let mut rank_of = vec![0; fitness.len()];
        for (r, &i) in order.iter().enumerate() {
            rank_of[i] = r;
        }
        Self { fitness, order, rank_of, second_pass: Vec::new(), first_pass: None }
    }

    pub fn best(&self) -> usize {
        self.order[0]
    }
}

/// Two-pass aggregated fitness with feasibility first.
///
/// Feasible members are aggregated as one population. Those scoring above
/// `threshold` are aggregated again among themselves, which spreads the
/// contenders over the full scale; the rest keep their first-pass score in
/// a lower tier. Infeasible members rank below all of them by violation.
pub fn evaluate_generation(
    population: &[Individual],
    aggregator: &Aggregator,
    threshold: f64,
) -> Result<GenerationFitness, SolverError> {
    let mut fitness: Vec<Fitness> =
        population.iter().map(|m| Fitness::Infeasible(m.violation())).collect();
    let feasible: Vec<usize> = (0..population.len()).filter(|&i| population[i].feasible()).collect();
    let rows: Vec<&[f64]> = feasible
        .iter()
        .map(|&i| population[i].preferences().expect("feasible members carry preferences"))
        .collect();

    let mut second_pass = Vec::new();
    let mut first_pass = None;
    match feasible.len() {
        0 => {}
        1 => {
            fitness[feasible[0]] = Fitness::Refined(MAX_SCORE);
            second_pass.push(feasible[0]);
        }
        _ => {
            let first = aggregator.aggregate_rows(&rows)?.aggregated;
            let mut keep = Vec::new();
            for (pos, &i) in feasible.iter().enumerate() {
                if first[pos] > threshold {
                    keep.push(pos);
                } else {
                    fitness[i] = Fitness::Filtered(first[pos]);
                }
            }
            if keep.len() == 1 {
                fitness[feasible[keep[0]]] = Fitness::Refined(MAX_SCORE);
            } else {
                let kept: Vec<&[f64]> = keep.iter().map(|&p| rows[p]).collect();
                let second = aggregator.aggregate_rows(&kept)?.aggregated;
                for (&p, s) in keep.iter().zip(second) {
                    fitness[feasible[p]] = Fitness::Refined(s);
                }
            }
            second_pass = keep.iter().map(|&p| feasible[p]).collect();
            first_pass = Some(first);
        }
    }
    let mut g = GenerationFitness::from_fitness(fitness);
    g.second_pass = second_pass;
    g.first_pass = first_pass;
    Ok(g)
}

/// Scalar fitness: feasible members by `cost`, infeasible by violation.
pub fn evaluate_scalar<F>(population: &[Individual], mut cost: F) -> GenerationFitness
where
    F: FnMut(&Individual) -> f64,
{
    let fitness = population
        .iter()
        .map(|m| if m.feasible() { Fitness::Scalar(cost(m)) } else { Fitness::Infeasible(m.violation()) })
        .collect();
    GenerationFitness::from_fitness(fitness)
}
