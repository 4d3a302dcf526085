//! Method dispatch and the canonical `result.json` layout shared by the CLI
//! and the HTTP service.

use std::fmt;
use std::str::FromStr;

use odesys_core::baselines::{
    brute_force_imap, evaluate_alternatives, run_minmax, run_sodo, ComparisonTable, Direction, GridSpec,
    MethodLabel,
};
use odesys_core::error::SolverError;
use odesys_core::solver::{GenerationRecord, RunResult, Termination};
use odesys_core::{GaConfig, Problem};
use serde::{Deserialize, Serialize};

use crate::document::ProblemDocument;

/// Intervals per continuous axis when `brute` is given no count.
pub const DEFAULT_BRUTE_DIVISIONS: usize = 80;

/// An optimization method with its options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Imap,
    MinMax,
    Sodo { objective: String, direction: Option<Direction> },
    Brute { divisions: usize },
}

impl Method {
    pub fn label(&self) -> MethodLabel {
        match self {
            Self::Imap => MethodLabel::Imap,
            Self::MinMax => MethodLabel::MinMax,
            Self::Sodo { objective, .. } => MethodLabel::Sodo(objective.clone()),
            Self::Brute { .. } => MethodLabel::Brute,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Imap => f.write_str("imap"),
            Self::MinMax => f.write_str("minmax"),
            Self::Sodo { objective, direction: None } => write!(f, "sodo:{objective}"),
            Self::Sodo { objective, direction: Some(Direction::Minimize) } => write!(f, "sodo:{objective}:min"),
            Self::Sodo { objective, direction: Some(Direction::Maximize) } => write!(f, "sodo:{objective}:max"),
            Self::Brute { divisions } if *divisions == DEFAULT_BRUTE_DIVISIONS => f.write_str("brute"),
            Self::Brute { divisions } => write!(f, "brute:{divisions}"),
        }
    }
}

impl FromStr for Method {
    type Err = String;

    /// Accepts `imap`, `minmax`, `sodo:<objective>[:min|:max]` and
    /// `brute[:<divisions>]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match (head, rest.as_slice()) {
            ("imap", []) => Ok(Self::Imap),
            ("minmax", []) => Ok(Self::MinMax),
            ("brute", []) => Ok(Self::Brute { divisions: DEFAULT_BRUTE_DIVISIONS }),
            ("brute", [n]) => match n.parse::<usize>() {
                Ok(d) if d > 0 => Ok(Self::Brute { divisions: d }),
                _ => Err(format!("invalid brute-force division count `{n}`")),
            },
            ("sodo", [o]) if !o.is_empty() => Ok(Self::Sodo { objective: o.to_string(), direction: None }),
            ("sodo", [o, d]) if !o.is_empty() => {
                let direction = match *d {
                    "min" => Direction::Minimize,
                    "max" => Direction::Maximize,
                    _ => return Err(format!("invalid direction `{d}`; expected min or max")),
                };
                Ok(Self::Sodo { objective: o.to_string(), direction: Some(direction) })
            }
            _ => Err(format!("unknown method `{s}`; expected imap, minmax, sodo:<objective> or brute")),
        }
    }
}

/// Runs one method. Brute force ignores the GA configuration and seeds.
pub fn execute(problem: &Problem, method: &Method, config: &GaConfig, seeds: &[Vec<f64>]) -> Result<RunResult, SolverError> {
    match method {
        Method::Imap => odesys_core::run_imap(problem, config, seeds),
        Method::MinMax => run_minmax(problem, config, seeds),
        Method::Sodo { objective, direction } => run_sodo(problem, objective, *direction, config, seeds),
        Method::Brute { divisions } => {
            let steps: Vec<f64> =
                problem.variables().iter().map(|v| (v.upper - v.lower) / *divisions as f64).collect();
            let grid = GridSpec::from_steps(problem, &steps);
            let brute = brute_force_imap(problem, &grid)?;
            let i = brute.argmax;
            Ok(RunResult {
                best: brute.points[i].clone(),
                objectives: brute.objectives[i].clone(),
                preferences: brute.preferences[i].clone(),
                score: brute.scores()[i],
                history: Vec::new(),
                generations: 0,
                evaluations: grid.size() as usize,
                termination: Termination::Exhausted,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionScore {
    pub stakeholder: String,
    pub objective: String,
    pub weight: f64,
    pub preference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintReport {
    pub name: String,
    pub value: f64,
    pub feasible: bool,
}

/// Contents of `result.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub problem: String,
    pub problem_hash: String,
    pub method: String,
    pub config: GaConfig,
    pub design: Vec<NamedValue>,
    pub objectives: Vec<NamedValue>,
    pub preferences: Vec<CriterionScore>,
    pub constraints: Vec<ConstraintReport>,
    /// Archive score for IMAP and brute force, the objective value for
    /// SODO, the worst weighted regret for min-max.
    pub score: f64,
    pub generations: usize,
    pub evaluations: usize,
    pub termination: Termination,
}

impl ResultDocument {
    pub fn new(problem: &Problem, hash: &str, method: &Method, config: &GaConfig, result: &RunResult) -> Self {
        let design = problem
            .variables()
            .iter()
            .zip(&result.best)
            .map(|(v, &value)| NamedValue { name: v.name.clone(), value })
            .collect();
        let objectives = problem
            .objectives()
            .iter()
            .zip(&result.objectives)
            .map(|(o, &value)| NamedValue { name: o.name.clone(), value })
            .collect();
        let preferences = problem
            .criteria()
            .iter()
            .zip(&result.preferences)
            .map(|(c, &preference)| CriterionScore {
                stakeholder: problem.stakeholders()[c.stakeholder].name.clone(),
                objective: problem.objectives()[c.objective].name.clone(),
                weight: c.weight,
                preference,
            })
            .collect();
        let constraints = problem
            .evaluate_constraints(&result.best)
            .map(|cs| cs.into_iter().map(|(name, value, feasible)| ConstraintReport { name, value, feasible }).collect())
            .unwrap_or_default();
        Self {
            problem: problem.name().to_string(),
            problem_hash: hash.to_string(),
            method: method.to_string(),
            config: config.clone(),
            design,
            objectives,
            preferences,
            constraints,
            score: result.score,
            generations: result.generations,
            evaluations: result.evaluations,
            termination: result.termination,
        }
    }

    pub fn x(&self) -> Vec<f64> {
        self.design.iter().map(|d| d.value).collect()
    }

    /// Pretty JSON with a trailing newline; the exact bytes written to disk.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("results always serialize");
        out.push(b'\n');
        out
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let x: Vec<String> = self.design.iter().map(|d| format!("{}={}", d.name, d.value)).collect();
        format!(
            "{} on {}: score {:.4} at [{}] after {} generations ({:?})",
            self.method,
            self.problem,
            self.score,
            x.join(", "),
            self.generations,
            self.termination
        )
    }
}

/// Per-generation diagnostics as JSON lines.
pub fn diagnostics_jsonl(history: &[GenerationRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    for record in history {
        serde_json::to_writer(&mut out, record).expect("records always serialize");
        out.push(b'\n');
    }
    out
}

/// One baseline or IMAP run inside an automatic comparison.
#[derive(Debug, Clone)]
pub struct LabelledRun {
    pub method: Method,
    pub result: RunResult,
}

/// Runs every SODO named by the document, then min-max, then IMAP seeded
/// with the baseline designs, and tabulates all of them.
pub fn auto_compare(
    problem: &Problem,
    document: &ProblemDocument,
    config: &GaConfig,
) -> Result<(ComparisonTable, Vec<LabelledRun>), SolverError> {
    let mut runs = Vec::new();
    for objective in document.sodo_objectives() {
        let method = Method::Sodo { objective, direction: None };
        let result = execute(problem, &method, config, &[])?;
        runs.push(LabelledRun { method, result });
    }
    let result = execute(problem, &Method::MinMax, config, &[])?;
    runs.push(LabelledRun { method: Method::MinMax, result });
    let seeds: Vec<Vec<f64>> = runs.iter().map(|r| r.result.best.clone()).collect();
    let result = execute(problem, &Method::Imap, config, &seeds)?;
    runs.push(LabelledRun { method: Method::Imap, result });
    let alternatives: Vec<(MethodLabel, Vec<f64>)> =
        runs.iter().map(|r| (r.method.label(), r.result.best.clone())).collect();
    let table = evaluate_alternatives(problem, &alternatives)?;
    Ok((table, runs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_strings_round_trip() {
        for s in ["imap", "minmax", "brute", "brute:10", "sodo:cost", "sodo:cost:min", "sodo:comfort:max"] {
            let m: Method = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert_eq!("brute:80".parse::<Method>().unwrap().to_string(), "brute");
    }

    #[test]
    fn bad_methods_are_rejected() {
        for s in ["", "imap:1", "sodo", "sodo:", "sodo:x:up", "brute:0", "brute:x", "nsga2"] {
            assert!(s.parse::<Method>().is_err(), "{s}");
        }
    }
}
