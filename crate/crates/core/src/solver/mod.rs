//! Genetic algorithm machinery and the inter-generational IMAP solver.

mod archive;
mod config;
mod fitness;
mod imap;
mod operators;
mod population;
mod scalar;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use archive::{Archive, ArchiveEntry, Verdict, TOP_TOLERANCE};
pub use config::GaConfig;
pub use fitness::{evaluate_generation, evaluate_scalar, Fitness, GenerationFitness};
pub use imap::{run_imap, run_imap_observed};
pub use operators::{crossover, mutate, step_generation, tournament, BLEND_RANGE};
pub use population::{evaluate_population, initialize_population, Individual};
pub use scalar::run_scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The stall limit was reached.
    Stalled,
    MaxGenerations,
    /// Every point of a brute-force grid was evaluated.
    Exhausted,
}

/// One line of run diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Score of the generation best: its archive score for IMAP, its cost
    /// for scalar runs. Absent when the generation had no feasible member.
    pub best_u: Option<f64>,
    pub verdict: Option<Verdict>,
    pub feasible_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best: Vec<f64>,
    pub objectives: Vec<f64>,
    pub preferences: Vec<f64>,
    /// Final archive score for IMAP (always 100), best cost otherwise.
    pub score: f64,
    pub history: Vec<GenerationRecord>,
    pub generations: usize,
    pub evaluations: usize,
    pub termination: Termination,
}

/// Read-only view handed to run observers after each generation.
#[derive(Debug)]
pub struct GenerationView<'a> {
    pub generation: usize,
    pub population: &'a [Individual],
    pub fitness: &'a GenerationFitness,
    pub record: &'a GenerationRecord,
}

fn feasible_fraction(population: &[Individual]) -> f64 {
    population.iter().filter(|m| m.feasible()).count() as f64 / population.len() as f64
}
