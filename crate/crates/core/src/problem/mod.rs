//! Problem representation: variables, performance functions, objectives,
//! constraints and stakeholder preferences.

mod grid;
mod variable;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{EvaluationError, ProblemError, WeightError};
use crate::pfm::{Aggregator, PreferenceCurve, WeightSet};

pub use grid::{GridError, TabulatedGrid};
pub use variable::{DesignVariable, DesignVector, VariableKind};

/// Default feasibility tolerance for constraint values.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Default band for equality constraints rewritten as `|h| - eps <= 0`.
pub const DEFAULT_EQUALITY_EPSILON: f64 = 1e-6;

/// What a coded function sees when it is evaluated.
#[derive(Debug, Clone, Copy)]
pub struct HookInputs<'a> {
    pub x: &'a [f64],
    /// Performance values computed so far, in declaration order.
    pub performance: &'a [f64],
    /// Objective values, when they are already known.
    pub objectives: Option<&'a [f64]>,
}

impl HookInputs<'_> {
    pub fn objective(&self, index: usize) -> Result<f64, EvaluationError> {
        self.objectives
            .and_then(|o| o.get(index).copied())
            .ok_or(EvaluationError::ObjectivesUnavailable)
    }
}

/// A natively coded function used as a performance function, objective or
/// constraint.
pub trait Hook: Send + Sync {
    fn call(&self, inputs: &HookInputs<'_>) -> Result<f64, EvaluationError>;
}

impl<F> Hook for F
where
    F: Fn(&HookInputs<'_>) -> Result<f64, EvaluationError> + Send + Sync,
{
    fn call(&self, inputs: &HookInputs<'_>) -> Result<f64, EvaluationError> {
        self(inputs)
    }
}

pub type SharedHook = Arc<dyn Hook>;

/// A hook together with the name it was resolved from.
#[derive(Clone)]
pub struct NamedHook {
    pub name: String,
    pub hook: SharedHook,
}

impl NamedHook {
    pub fn new(name: impl Into<String>, hook: SharedHook) -> Self {
        Self { name: name.into(), hook }
    }
}

impl fmt::Debug for NamedHook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("NamedHook").field(&self.name).finish()
    }
}

#[derive(Debug, Clone)]
pub enum PerformanceKind {
    /// The value of one design variable.
    Variable(usize),
    /// Bilinear lookup over two design variables.
    Grid { variables: [usize; 2], grid: TabulatedGrid },
    Hook(NamedHook),
}

#[derive(Debug, Clone)]
pub struct PerformanceFunction {
    pub name: String,
    pub kind: PerformanceKind,
}

#[derive(Debug, Clone)]
pub struct Objective {
    pub name: String,
    pub unit: String,
    pub hook: NamedHook,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConstraintKind {
    Inequality,
    Equality { epsilon: f64 },
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    pub kind: ConstraintKind,
    pub hook: NamedHook,
    /// Values up to this count as satisfied.
    pub tolerance: f64,
}

impl Constraint {
    /// Maps a raw hook value to the `<= 0` form.
    pub fn rewrite(&self, raw: f64) -> f64 {
        match self.kind {
            ConstraintKind::Inequality => raw,
            ConstraintKind::Equality { epsilon } => raw.abs() - epsilon,
        }
    }
}

/// A named exogenous constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExogenousParam {
    pub name: String,
    pub value: f64,
    #[serde(default)]
    pub unit: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exogenous(pub Vec<ExogenousParam>);

impl Exogenous {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|p| p.name == name).map(|p| p.value)
    }

    pub fn get_or(&self, name: &str, default: f64) -> f64 {
        self.get(name).unwrap_or(default)
    }
}

/// One stakeholder's stake in one objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stake {
    pub objective: String,
    pub weight: f64,
    pub curve: Option<PreferenceCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stakeholder {
    pub name: String,
    pub weight: f64,
    pub stakes: Vec<Stake>,
}

/// A criterion: one stakeholder's curve over one objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub stakeholder: usize,
    pub objective: usize,
    pub weight: f64,
    pub curve: PreferenceCurve,
}

/// Unvalidated parts of a problem.
#[derive(Debug, Clone, Default)]
pub struct ProblemSpec {
    pub name: String,
    pub variables: Vec<DesignVariable>,
    pub exogenous: Exogenous,
    pub performance: Vec<PerformanceFunction>,
    pub objectives: Vec<Objective>,
    pub constraints: Vec<Constraint>,
    pub stakeholders: Vec<Stakeholder>,
}

/// A validated, immutable problem.
#[derive(Debug, Clone)]
pub struct Problem {
    spec: ProblemSpec,
    weights: WeightSet,
    criteria: Vec<Criterion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintValue {
    /// Value in the rewritten `<= 0` form.
    pub value: f64,
    pub feasible: bool,
}

/// Everything computed for one design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub performance: Vec<f64>,
    pub constraints: Vec<ConstraintValue>,
    /// Sum of the amounts by which constraints exceed their tolerance.
    pub violation: f64,
    pub feasible: bool,
    /// Missing only for infeasible designs whose objectives failed.
    pub objectives: Option<Vec<f64>>,
    /// One score per criterion, present whenever objectives are.
    pub preferences: Option<Vec<f64>>,
}

fn check_unique<'a>(
    what: &'static str,
    names: impl Iterator<Item = &'a str>,
) -> Result<(), ProblemError> {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(ProblemError::DuplicateName { what, name: name.into() });
        }
    }
    Ok(())
}

impl Problem {
    pub fn new(spec: ProblemSpec) -> Result<Self, ProblemError> {
        if spec.variables.is_empty() {
            return Err(ProblemError::Missing("variables"));
        }
        if spec.objectives.is_empty() {
            return Err(ProblemError::Missing("objectives"));
        }
        if spec.stakeholders.is_empty() {
            return Err(ProblemError::Weights(WeightError::Empty));
        }
        for v in &spec.variables {
            v.validate()?;
        }
        check_unique("variable", spec.variables.iter().map(|v| v.name.as_str()))?;
        check_unique("performance function", spec.performance.iter().map(|p| p.name.as_str()))?;
        check_unique("objective", spec.objectives.iter().map(|o| o.name.as_str()))?;
        check_unique("constraint", spec.constraints.iter().map(|c| c.name.as_str()))?;
        check_unique("stakeholder", spec.stakeholders.iter().map(|s| s.name.as_str()))?;

        let n = spec.variables.len();
        for p in &spec.performance {
            let refs: &[usize] = match &p.kind {
                PerformanceKind::Variable(i) => core::slice::from_ref(i),
                PerformanceKind::Grid { variables, .. } => variables,
                PerformanceKind::Hook(_) => &[],
            };
            if let Some(&index) = refs.iter().find(|&&i| i >= n) {
                return Err(ProblemError::UnknownVariable { name: p.name.clone(), index });
            }
        }
        for c in &spec.constraints {
            let eps_ok = match c.kind {
                ConstraintKind::Inequality => true,
                ConstraintKind::Equality { epsilon } => epsilon.is_finite() && epsilon >= 0.0,
            };
            if !eps_ok || !c.tolerance.is_finite() || c.tolerance < 0.0 {
                return Err(ProblemError::InvalidTolerance { name: c.name.clone() });
            }
        }

        let m = spec.objectives.len();
        let mut rows = Vec::with_capacity(spec.stakeholders.len());
        let mut curves: Vec<Vec<Option<PreferenceCurve>>> = Vec::new();
        for s in &spec.stakeholders {
            let mut row = alloc::vec![0.0; m];
            let mut row_curves = alloc::vec![None; m];
            for stake in &s.stakes {
                let i = spec
                    .objectives
                    .iter()
                    .position(|o| o.name == stake.objective)
                    .ok_or_else(|| ProblemError::UnknownObjective {
                        stakeholder: s.name.clone(),
                        objective: stake.objective.clone(),
                    })?;
                if row_curves[i].is_some() || row[i] != 0.0 {
                    return Err(ProblemError::DuplicateName {
                        what: "stake",
                        name: stake.objective.clone(),
                    });
                }
                row[i] = stake.weight;
                row_curves[i] = stake.curve.clone();
            }
            rows.push(row);
            curves.push(row_curves);
        }
        let stakeholder_weights = spec.stakeholders.iter().map(|s| s.weight).collect();
        let weights = WeightSet::combine(stakeholder_weights, rows)?;

        let mut criteria = Vec::new();
        for (k, i) in weights.criteria() {
            let curve = curves[k][i].clone().ok_or_else(|| ProblemError::MissingCurve {
                stakeholder: spec.stakeholders[k].name.clone(),
                objective: spec.objectives[i].name.clone(),
            })?;
            criteria.push(Criterion { stakeholder: k, objective: i, weight: weights.combined()[k][i], curve });
        }
        Ok(Self { spec, weights, criteria })
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn variables(&self) -> &[DesignVariable] {
        &self.spec.variables
    }

    pub fn exogenous(&self) -> &Exogenous {
        &self.spec.exogenous
    }

    pub fn performance(&self) -> &[PerformanceFunction] {
        &self.spec.performance
    }

    pub fn objectives(&self) -> &[Objective] {
        &self.spec.objectives
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.spec.constraints
    }

    pub fn stakeholders(&self) -> &[Stakeholder] {
        &self.spec.stakeholders
    }

    pub fn weights(&self) -> &WeightSet {
        &self.weights
    }

    /// Criteria in score-matrix column order.
    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn aggregator(&self) -> Aggregator {
        Aggregator::new(self.criteria.iter().map(|c| c.weight).collect())
    }

    pub fn objective_index(&self, name: &str) -> Option<usize> {
        self.spec.objectives.iter().position(|o| o.name == name)
    }

    pub fn dimension(&self) -> usize {
        self.spec.variables.len()
    }

    /// Checks length, bounds and integrality.
    pub fn check(&self, x: &[f64]) -> Result<(), EvaluationError> {
        if x.len() != self.dimension() {
            return Err(EvaluationError::Dimension { expected: self.dimension(), found: x.len() });
        }
        for (v, &value) in self.spec.variables.iter().zip(x) {
            if !v.contains(value) {
                return Err(EvaluationError::OutOfBounds { variable: v.name.clone(), value });
            }
        }
        Ok(())
    }

    pub fn design_vector(&self, values: Vec<f64>) -> Result<DesignVector, EvaluationError> {
        self.check(&values)?;
        Ok(DesignVector(values))
    }

    /// Moves each value to the nearest admissible one.
    pub fn clip(&self, x: &mut [f64]) {
        for (v, value) in self.spec.variables.iter().zip(x.iter_mut()) {
            *value = v.clip(*value);
        }
    }

    fn performance_values(&self, x: &[f64]) -> Result<Vec<f64>, EvaluationError> {
        let mut out = Vec::with_capacity(self.spec.performance.len());
        for p in &self.spec.performance {
            let value = match &p.kind {
                PerformanceKind::Variable(i) => x[*i],
                PerformanceKind::Grid { variables: [a, b], grid } => grid.interpolate(x[*a], x[*b])?,
                PerformanceKind::Hook(h) => {
                    h.hook.call(&HookInputs { x, performance: &out, objectives: None })?
                }
            };
            finite("performance function", &p.name, value)?;
            out.push(value);
        }
        Ok(out)
    }

    fn objective_values(&self, x: &[f64], performance: &[f64]) -> Result<Vec<f64>, EvaluationError> {
        let inputs = HookInputs { x, performance, objectives: None };
        self.spec
            .objectives
            .iter()
            .map(|o| finite("objective", &o.name, o.hook.hook.call(&inputs)?))
            .collect()
    }

    fn constraint_values(
        &self,
        x: &[f64],
        performance: &[f64],
        objectives: Option<&[f64]>,
    ) -> Result<Vec<ConstraintValue>, EvaluationError> {
        let inputs = HookInputs { x, performance, objectives };
        self.spec
            .constraints
            .iter()
            .map(|c| {
                let value = c.rewrite(finite("constraint", &c.name, c.hook.hook.call(&inputs)?)?);
                Ok(ConstraintValue { value, feasible: value <= c.tolerance })
            })
            .collect()
    }

    /// Full evaluation of one design.
    ///
    /// Objective failures are tolerated at infeasible designs, where models
    /// such as a fleet simulation may be undefined.
    pub fn evaluate(&self, x: &[f64]) -> Result<Evaluation, EvaluationError> {
        self.check(x)?;
        let performance = self.performance_values(x)?;
        let objectives = self.objective_values(x, &performance);
        let constraints =
            self.constraint_values(x, &performance, objectives.as_ref().ok().map(Vec::as_slice))?;
        let violation = self
            .spec
            .constraints
            .iter()
            .zip(&constraints)
            .map(|(c, v)| (v.value - c.tolerance).max(0.0))
            .sum::<f64>();
        let feasible = constraints.iter().all(|c| c.feasible);
        let objectives = match objectives {
            Ok(o) => Some(o),
            Err(_) if !feasible => None,
            Err(e) => return Err(e),
        };
        let preferences = objectives.as_deref().map(|o| self.preferences_for(o));
        Ok(Evaluation { performance, constraints, violation, feasible, objectives, preferences })
    }

    pub fn evaluate_objectives(&self, x: &[f64]) -> Result<Vec<f64>, EvaluationError> {
        self.check(x)?;
        let performance = self.performance_values(x)?;
        self.objective_values(x, &performance)
    }

    /// `(name, rewritten value, feasible)` for every constraint.
    pub fn evaluate_constraints(
        &self,
        x: &[f64],
    ) -> Result<Vec<(String, f64, bool)>, EvaluationError> {
        self.check(x)?;
        let performance = self.performance_values(x)?;
        let objectives = self.objective_values(x, &performance).ok();
        let values = self.constraint_values(x, &performance, objectives.as_deref())?;
        Ok(self
            .spec
            .constraints
            .iter()
            .zip(values)
            .map(|(c, v)| (c.name.clone(), v.value, v.feasible))
            .collect())
    }

    /// Preference scores for an objective vector, one per criterion.
    pub fn preferences_for(&self, objectives: &[f64]) -> Vec<f64> {
        self.criteria.iter().map(|c| c.curve.evaluate(objectives[c.objective])).collect()
    }

    pub fn preference_vector(&self, x: &[f64]) -> Result<Vec<f64>, EvaluationError> {
        Ok(self.preferences_for(&self.evaluate_objectives(x)?))
    }
}

fn finite(what: &'static str, name: &str, value: f64) -> Result<f64, EvaluationError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(EvaluationError::NonFinite { what, name: name.into() })
    }
}
