//! The JSON problem-definition document.

use std::collections::BTreeMap;

use odesys_core::error::{HookError, ProblemError};
use odesys_core::hooks::{HookContext, HookRegistry};
use odesys_core::pfm::PreferenceCurve;
use odesys_core::problem::{
    Constraint, ConstraintKind, DesignVariable, Exogenous, ExogenousParam, Objective,
    PerformanceFunction, PerformanceKind, ProblemSpec, Stake, Stakeholder, TabulatedGrid,
    VariableKind, DEFAULT_EQUALITY_EPSILON, DEFAULT_TOLERANCE,
};
use odesys_core::Problem;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub variables: Vec<VariableDoc>,
    #[serde(default)]
    pub exogenous: Vec<ExogenousParam>,
    #[serde(default)]
    pub performance: Vec<PerformanceDoc>,
    pub objectives: Vec<ObjectiveDoc>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDoc>,
    pub stakeholders: Vec<StakeholderDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    pub kind: VariableKind,
    pub lower: f64,
    pub upper: f64,
    #[serde(default)]
    pub unit: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerformanceDocKind {
    Variable,
    Grid,
    Hook,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerformanceDoc {
    pub name: String,
    pub kind: PerformanceDocKind,
    #[serde(default)]
    pub unit: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hook: Option<String>,
}

/// Values on a 2-D grid, row-major with the first axis outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub variables: [String; 2],
    pub axes: [Vec<f64>; 2],
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveDoc {
    pub name: String,
    pub hook: String,
    #[serde(default)]
    pub unit: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintDocKind {
    Inequality,
    Equality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub name: String,
    pub kind: ConstraintDocKind,
    pub hook: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StakeDoc {
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<PreferenceCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StakeholderDoc {
    pub name: String,
    pub weight: f64,
    pub objectives: BTreeMap<String, StakeDoc>,
}

/// Which baselines `compare --auto` runs besides min-max and IMAP.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonDoc {
    #[serde(default)]
    pub sodo: Vec<String>,
}

/// Replacement curves and weights for an existing problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferencesUpdate {
    pub stakeholders: Vec<StakeholderDoc>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: {source}")]
    Hook { path: String, source: HookError },
    #[error("{}{source}", path.as_deref().map(|p| format!("{p}: ")).unwrap_or_default())]
    Problem { path: Option<String>, source: ProblemError },
}

impl DocumentError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Schema { .. } => "schema_error",
            Self::Invalid { .. } => "invalid_document",
            Self::Hook { source: HookError::UnknownHook(_), .. } => "unknown_hook",
            Self::Hook { .. } => "hook_error",
            Self::Problem { source: ProblemError::Weights(_), .. } => "weight_error",
            Self::Problem { source: ProblemError::MissingCurve { .. }, .. } => "missing_curve",
            Self::Problem { .. } => "problem_error",
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            Self::Schema { path, .. } | Self::Invalid { path, .. } | Self::Hook { path, .. } => {
                Some(path)
            }
            Self::Problem { path, .. } => path.as_deref(),
        }
    }
}

/// Deserializes JSON, reporting the field path of the first error.
pub fn from_json_str<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, DocumentError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| DocumentError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Invalid { path: path.into(), message: message.into() }
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        from_json_str(text)
    }

    /// Canonical serialization used for hashing and storage.
    pub fn to_canonical_json(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("documents always serialize")
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_canonical_json()))
    }

    pub fn sodo_objectives(&self) -> Vec<String> {
        match &self.comparison {
            Some(c) if !c.sodo.is_empty() => c.sodo.clone(),
            _ => self.objectives.iter().map(|o| o.name.clone()).collect(),
        }
    }

    pub fn with_preferences(&self, update: PreferencesUpdate) -> Self {
        Self { stakeholders: update.stakeholders, ..self.clone() }
    }

    /// Resolves hooks and validates everything into a [`Problem`].
    pub fn build(&self, registry: &HookRegistry) -> Result<Problem, DocumentError> {
        let mut variables = Vec::with_capacity(self.variables.len());
        for (i, v) in self.variables.iter().enumerate() {
            let var = DesignVariable::new(v.name.clone(), v.kind, v.lower, v.upper)
                .map_err(|e| DocumentError::Problem { path: Some(format!("variables[{i}]")), source: e })?;
            variables.push(var);
        }
        let var_index = |name: &str, path: String| {
            variables
                .iter()
                .position(|v| v.name == name)
                .ok_or_else(|| invalid(path, format!("unknown variable `{name}`")))
        };
        let exogenous = Exogenous(self.exogenous.clone());
        let objective_names: Vec<String> = self.objectives.iter().map(|o| o.name.clone()).collect();

        let mut performance: Vec<PerformanceFunction> = Vec::new();
        for (i, p) in self.performance.iter().enumerate() {
            let path = format!("performance[{i}]");
            let kind = match p.kind {
                PerformanceDocKind::Variable => {
                    let name = p.variable.as_deref().ok_or_else(|| invalid(format!("{path}.variable"), "missing field"))?;
                    PerformanceKind::Variable(var_index(name, format!("{path}.variable"))?)
                }
                PerformanceDocKind::Grid => {
                    let g = p.grid.as_ref().ok_or_else(|| invalid(format!("{path}.grid"), "missing field"))?;
                    let a = var_index(&g.variables[0], format!("{path}.grid.variables[0]"))?;
                    let b = var_index(&g.variables[1], format!("{path}.grid.variables[1]"))?;
                    let grid = TabulatedGrid::new(g.axes[0].clone(), g.axes[1].clone(), g.values.clone())
                        .map_err(|e| invalid(format!("{path}.grid"), e.to_string()))?;
                    PerformanceKind::Grid { variables: [a, b], grid }
                }
                PerformanceDocKind::Hook => {
                    let hook = p.hook.as_deref().ok_or_else(|| invalid(format!("{path}.hook"), "missing field"))?;
                    let ctx = HookContext {
                        variables: &variables,
                        exogenous: &exogenous,
                        performance: &performance,
                        objectives: &objective_names,
                    };
                    let resolved = registry
                        .resolve(hook, &ctx)
                        .map_err(|source| DocumentError::Hook { path: format!("{path}.hook"), source })?;
                    PerformanceKind::Hook(resolved)
                }
            };
            performance.push(PerformanceFunction { name: p.name.clone(), kind });
        }

        let ctx = HookContext {
            variables: &variables,
            exogenous: &exogenous,
            performance: &performance,
            objectives: &objective_names,
        };
        let mut objectives = Vec::new();
        for (i, o) in self.objectives.iter().enumerate() {
            let hook = registry
                .resolve(&o.hook, &ctx)
                .map_err(|source| DocumentError::Hook { path: format!("objectives[{i}].hook"), source })?;
            objectives.push(Objective { name: o.name.clone(), unit: o.unit.clone(), hook });
        }
        let mut constraints = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            let hook = registry
                .resolve(&c.hook, &ctx)
                .map_err(|source| DocumentError::Hook { path: format!("constraints[{i}].hook"), source })?;
            let kind = match c.kind {
                ConstraintDocKind::Inequality if c.epsilon.is_some() => {
                    return Err(invalid(format!("constraints[{i}].epsilon"), "only equality constraints take an epsilon"));
                }
                ConstraintDocKind::Inequality => ConstraintKind::Inequality,
                ConstraintDocKind::Equality => {
                    ConstraintKind::Equality { epsilon: c.epsilon.unwrap_or(DEFAULT_EQUALITY_EPSILON) }
                }
            };
            constraints.push(Constraint {
                name: c.name.clone(),
                kind,
                hook,
                tolerance: c.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            });
        }

        let stakeholders = self
            .stakeholders
            .iter()
            .map(|s| Stakeholder {
                name: s.name.clone(),
                weight: s.weight,
                stakes: s
                    .objectives
                    .iter()
                    .map(|(objective, st)| Stake { objective: objective.clone(), weight: st.weight, curve: st.curve.clone() })
                    .collect(),
            })
            .collect();

        let spec = ProblemSpec {
            name: self.name.clone(),
            variables,
            exogenous,
            performance,
            objectives,
            constraints,
            stakeholders,
        };
        Problem::new(spec).map_err(|source| DocumentError::Problem { path: self.problem_error_path(&source), source })
    }

    fn problem_error_path(&self, e: &ProblemError) -> Option<String> {
        let stakeholder = |name: &str| self.stakeholders.iter().position(|s| s.name == name);
        match e {
            ProblemError::MissingCurve { stakeholder: s, objective } => {
                stakeholder(s).map(|k| format!("stakeholders[{k}].objectives.{objective}.curve"))
            }
            ProblemError::UnknownObjective { stakeholder: s, objective } => {
                stakeholder(s).map(|k| format!("stakeholders[{k}].objectives.{objective}"))
            }
            ProblemError::Weights(_) => Some("stakeholders".into()),
            ProblemError::InvalidTolerance { name } => {
                self.constraints.iter().position(|c| &c.name == name).map(|i| format!("constraints[{i}]"))
            }
            _ => None,
        }
    }
}

/// Parses and builds in one step.
pub fn load_problem(text: &str, registry: &HookRegistry) -> Result<(ProblemDocument, Problem), DocumentError> {
    let doc = ProblemDocument::from_json(text)?;
    let problem = doc.build(registry)?;
    Ok((doc, problem))
}
