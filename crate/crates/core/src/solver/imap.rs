use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SolverError;
use crate::problem::Problem;
use crate::solver::{
    evaluate_generation, evaluate_population, feasible_fraction, initialize_population,
    step_generation, Archive, ArchiveEntry, GaConfig, GenerationRecord, GenerationView, RunResult,
    Termination,
};

/// Maximizes the aggregated group preference.
pub fn run_imap(problem: &Problem, config: &GaConfig, seeds: &[Vec<f64>]) -> Result<RunResult, SolverError> {
    run_imap_observed(problem, config, seeds, |_| {})
}

/// [`run_imap`] with a callback after every generation.
pub fn run_imap_observed<F>(
    problem: &Problem,
    config: &GaConfig,
    seeds: &[Vec<f64>],
    mut observe: F,
) -> Result<RunResult, SolverError>
where
    F: FnMut(&GenerationView<'_>),
{
    config.validate()?;
    let aggregator = problem.aggregator();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut xs = initialize_population(problem, seeds, config, &mut rng)?;
    let mut archive = Archive::new();
    let mut history = Vec::new();
    let mut evaluations = 0;
    let mut termination = Termination::MaxGenerations;

    for generation in 0..config.max_generations {
        let population = evaluate_population(problem, xs)?;
        evaluations += population.len();
        let fitness = evaluate_generation(&population, &aggregator, config.relevance_threshold)?;
        let best = &population[fitness.best()];
        let (verdict, best_u) = if best.feasible() {
            let entry = ArchiveEntry {
                generation,
                x: best.x.clone(),
                objectives: best.evaluation.objectives.clone().expect("feasible member has objectives"),
                preferences: best.evaluation.preferences.clone().expect("feasible member has preferences"),
            };
            let verdict = archive.update(entry, &aggregator)?;
            (Some(verdict), archive.scores().last().copied())
        } else {
            (None, None)
        };
        let record = GenerationRecord {
            generation,
            best_u,
            verdict,
            feasible_fraction: feasible_fraction(&population),
        };
        log::debug!("generation {generation}: {record:?}");
        observe(&GenerationView { generation, population: &population, fitness: &fitness, record: &record });
        history.push(record);
        if archive.stall() >= config.stall_limit {
            termination = Termination::Stalled;
            break;
        }
        if generation + 1 == config.max_generations {
            break;
        }
        let parents: Vec<Vec<f64>> = population.into_iter().map(|m| m.x).collect();
        xs = step_generation(&parents, &fitness, problem, config, &mut rng);
    }

    let best_index = archive.best_index().ok_or(SolverError::NoFeasiblePoint)?;
    let best = archive.entries()[best_index].clone();
    Ok(RunResult {
        best: best.x,
        objectives: best.objectives,
        preferences: best.preferences,
        score: archive.scores()[best_index],
        generations: history.len(),
        history,
        evaluations,
        termination,
    })
}
