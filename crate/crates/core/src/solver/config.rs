use alloc::format;

use serde::{Deserialize, Serialize};

use crate::error::SolverError;

/// Genetic algorithm settings shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1 / N`.
    pub mutation_rate: Option<f64>,
    pub elite_count: usize,
    pub tournament_size: usize,
    /// Members scoring at or below this in the first aggregation pass are
    /// left out of the second.
    pub relevance_threshold: f64,
    /// Consecutive generations without improvement before stopping.
    pub stall_limit: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 120,
            max_generations: 400,
            crossover_rate: 0.85,
            mutation_rate: None,
            elite_count: 2,
            tournament_size: 3,
            relevance_threshold: 20.0,
            stall_limit: 25,
            rng_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn with_seed(rng_seed: u64) -> Self {
        Self { rng_seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let fail = |msg: alloc::string::String| Err(SolverError::Config(msg));
        if self.population_size < 4 {
            return fail(format!("population_size must be at least 4, got {}", self.population_size));
        }
        if self.max_generations == 0 {
            return fail("max_generations must be at least 1".into());
        }
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.crossover_rate) {
            return fail(format!("crossover_rate must lie in [0, 1], got {}", self.crossover_rate));
        }
        if let Some(m) = self.mutation_rate {
            if !unit(m) {
                return fail(format!("mutation_rate must lie in [0, 1], got {m}"));
            }
        }
        if self.elite_count >= self.population_size {
            return fail("elite_count must be smaller than population_size".into());
        }
        if self.tournament_size == 0 {
            return fail("tournament_size must be at least 1".into());
        }
        if !(0.0..=100.0).contains(&self.relevance_threshold) {
            return fail(format!(
                "relevance_threshold must lie in [0, 100], got {}",
                self.relevance_threshold
            ));
        }
        if self.stall_limit == 0 {
            return fail("stall_limit must be at least 1".into());
        }
        Ok(())
    }

    pub fn mutation_rate_for(&self, genes: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / genes.max(1) as f64)
    }
}
