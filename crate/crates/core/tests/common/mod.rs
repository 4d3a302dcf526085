#![allow(dead_code)]

use std::sync::Arc;

use odesys_core::error::EvaluationError;
use odesys_core::problem::{
    Constraint, ConstraintKind, HookInputs, NamedHook, Objective, ProblemSpec, Stake, Stakeholder,
    DEFAULT_TOLERANCE,
};
use odesys_core::{DesignVariable, PreferenceCurve, Problem};

pub fn hook(
    name: &str,
    f: impl Fn(&HookInputs<'_>) -> Result<f64, EvaluationError> + Send + Sync + 'static,
) -> NamedHook {
    NamedHook::new(name, Arc::new(f))
}

pub fn objective(
    name: &str,
    f: impl Fn(&HookInputs<'_>) -> Result<f64, EvaluationError> + Send + Sync + 'static,
) -> Objective {
    Objective { name: name.into(), unit: String::new(), hook: hook(name, f) }
}

pub fn inequality(
    name: &str,
    f: impl Fn(&HookInputs<'_>) -> Result<f64, EvaluationError> + Send + Sync + 'static,
) -> Constraint {
    Constraint { name: name.into(), kind: ConstraintKind::Inequality, hook: hook(name, f), tolerance: DEFAULT_TOLERANCE }
}

pub fn stakeholder(name: &str, weight: f64, objective: &str, knots: &[(f64, f64)]) -> Stakeholder {
    Stakeholder {
        name: name.into(),
        weight,
        stakes: vec![Stake {
            objective: objective.into(),
            weight: 1.0,
            curve: Some(PreferenceCurve::new(knots.to_vec()).unwrap()),
        }],
    }
}

/// Two stakeholders, each wanting one coordinate near zero.
pub fn sphere() -> Problem {
    Problem::new(ProblemSpec {
        name: "sphere".into(),
        variables: vec![
            DesignVariable::continuous("x", -1.0, 1.0).unwrap(),
            DesignVariable::continuous("y", -1.0, 1.0).unwrap(),
        ],
        objectives: vec![
            objective("ax", |i| Ok(i.x[0].abs())),
            objective("ay", |i| Ok(i.x[1].abs())),
            objective("r2", |i| Ok(i.x[0] * i.x[0] + i.x[1] * i.x[1])),
        ],
        stakeholders: vec![
            stakeholder("a", 0.5, "ax", &[(0.0, 100.0), (1.0, 0.0)]),
            stakeholder("b", 0.5, "ay", &[(0.0, 100.0), (1.0, 0.0)]),
        ],
        ..ProblemSpec::default()
    })
    .unwrap()
}

/// The sphere with the half-plane `x >= 0.5` as a constraint.
pub fn constrained_sphere() -> Problem {
    let mut spec = sphere().spec().clone();
    spec.name = "constrained".into();
    spec.constraints = vec![inequality("x_at_least_half", |i| Ok(0.5 - i.x[0]))];
    Problem::new(spec).unwrap()
}

/// One variable whose two objectives pull in opposite directions.
pub fn tug_of_war() -> Problem {
    Problem::new(ProblemSpec {
        name: "tug".into(),
        variables: vec![DesignVariable::continuous("x", 0.0, 1.0).unwrap()],
        objectives: vec![objective("left", |i| Ok(i.x[0])), objective("right", |i| Ok(1.0 - i.x[0]))],
        stakeholders: vec![
            stakeholder("a", 0.5, "left", &[(0.0, 100.0), (1.0, 0.0)]),
            stakeholder("b", 0.5, "right", &[(0.0, 100.0), (1.0, 0.0)]),
        ],
        ..ProblemSpec::default()
    })
    .unwrap()
}
