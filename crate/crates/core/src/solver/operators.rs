use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::problem::{DesignVariable, Problem};
use crate::solver::{Fitness, GaConfig, GenerationFitness};

/// Blend factor range for continuous crossover.
pub const BLEND_RANGE: (f64, f64) = (-0.1, 1.1);

/// Best of `size` uniformly drawn members; on equal fitness the first drawn
/// wins, so a flat population is selected uniformly.
pub fn tournament<R: Rng + ?Sized>(fitness: &[Fitness], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..fitness.len());
    for _ in 1..size {
        let c = rng.random_range(0..fitness.len());
        if fitness[c].compare(&fitness[best]) == Ordering::Greater {
            best = c;
        }
    }
    best
}

/// Blend crossover for continuous genes and uniform swap for integer genes.
pub fn crossover<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    variables: &[DesignVariable],
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for (n, v) in variables.iter().enumerate() {
        if v.is_integer() {
            if rng.random_bool(0.5) {
                c1[n] = b[n];
                c2[n] = a[n];
            }
        } else {
            let u = rng.random_range(BLEND_RANGE.0..=BLEND_RANGE.1);
            c1[n] = v.clip(u * a[n] + (1.0 - u) * b[n]);
            c2[n] = v.clip(u * b[n] + (1.0 - u) * a[n]);
        }
    }
    (c1, c2)
}

/// Resamples each gene uniformly within its bounds with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(x: &mut [f64], variables: &[DesignVariable], rate: f64, rng: &mut R) {
    if rate <= 0.0 {
        return;
    }
    for (value, v) in x.iter_mut().zip(variables) {
        if rng.random_bool(rate.min(1.0)) {
            *value = v.sample(rng);
        }
    }
}

/// Next population: elites, then tournament-selected offspring.
pub fn step_generation<R: Rng + ?Sized>(
    population: &[Vec<f64>],
    fitness: &GenerationFitness,
    problem: &Problem,
    config: &GaConfig,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let variables = problem.variables();
    let rate = config.mutation_rate_for(variables.len());
    let size = config.population_size;
    let mut next: Vec<Vec<f64>> =
        fitness.order.iter().take(config.elite_count.min(size)).map(|&i| population[i].clone()).collect();
    while next.len() < size {
        let p1 = &population[tournament(&fitness.fitness, config.tournament_size, rng)];
        let p2 = &population[tournament(&fitness.fitness, config.tournament_size, rng)];
        let (mut c1, mut c2) = if rng.random_bool(config.crossover_rate) {
            crossover(p1, p2, variables, rng)
        } else {
            (p1.clone(), p2.clone())
        };
        mutate(&mut c1, variables, rate, rng);
        mutate(&mut c2, variables, rate, rng);
        next.push(c1);
        if next.len() < size {
            next.push(c2);
        }
    }
    next
}
