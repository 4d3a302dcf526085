use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SolverError;
use crate::problem::Problem;
use crate::solver::{
    evaluate_population, evaluate_scalar, feasible_fraction, initialize_population, step_generation,
    GaConfig, GenerationRecord, GenerationView, Individual, RunResult, Termination, Verdict,
};

/// Minimizes a scalar cost of feasible designs, keeping a monotone
/// best-so-far. Used by the min-max and single-objective baselines.
pub fn run_scalar<C, F>(
    problem: &Problem,
    config: &GaConfig,
    seeds: &[Vec<f64>],
    mut cost: C,
    mut observe: F,
) -> Result<RunResult, SolverError>
where
    C: FnMut(&Individual) -> f64,
    F: FnMut(&GenerationView<'_>),
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut xs = initialize_population(problem, seeds, config, &mut rng)?;
    let mut best: Option<(f64, Individual)> = None;
    let mut stall = 0;
    let mut history = Vec::new();
    let mut evaluations = 0;
    let mut termination = Termination::MaxGenerations;

    for generation in 0..config.max_generations {
        let population = evaluate_population(problem, xs)?;
        evaluations += population.len();
        let fitness = evaluate_scalar(&population, &mut cost);
        let leader = &population[fitness.best()];
        let (verdict, best_u) = if leader.feasible() {
            let c = cost(leader);
            let verdict = match &best {
                Some((b, _)) if c > *b => Verdict::Regressed,
                Some((b, _)) if c == *b => Verdict::Plateau,
                _ => Verdict::Improved,
            };
            if verdict == Verdict::Improved {
                best = Some((c, leader.clone()));
                stall = 0;
            } else {
                stall += 1;
            }
            (Some(verdict), Some(c))
        } else {
            (None, None)
        };
        let record = GenerationRecord {
            generation,
            best_u,
            verdict,
            feasible_fraction: feasible_fraction(&population),
        };
        observe(&GenerationView { generation, population: &population, fitness: &fitness, record: &record });
        history.push(record);
        if stall >= config.stall_limit {
            termination = Termination::Stalled;
            break;
        }
        if generation + 1 == config.max_generations {
            break;
        }
        let parents: Vec<Vec<f64>> = population.into_iter().map(|m| m.x).collect();
        xs = step_generation(&parents, &fitness, problem, config, &mut rng);
    }

    let (score, best) = best.ok_or(SolverError::NoFeasiblePoint)?;
    let evaluation = best.evaluation;
    Ok(RunResult {
        best: best.x,
        objectives: evaluation.objectives.expect("feasible member has objectives"),
        preferences: evaluation.preferences.expect("feasible member has preferences"),
        score,
        generations: history.len(),
        history,
        evaluations,
        termination,
    })
}
