use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::problem::Problem;

/// Fewest alternatives a comparison table accepts.
pub const MIN_ALTERNATIVES: usize = 3;

/// Where a design in a comparison came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MethodLabel {
    Imap,
    MinMax,
    Sodo(String),
    Brute,
    /// A design entered by hand.
    Manual(String),
}

impl fmt::Display for MethodLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Imap => f.write_str("imap"),
            Self::MinMax => f.write_str("minmax"),
            Self::Sodo(o) => write!(f, "sodo:{o}"),
            Self::Brute => f.write_str("brute"),
            Self::Manual(name) => write!(f, "manual:{name}"),
        }
    }
}

impl FromStr for MethodLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "imap" => Ok(Self::Imap),
            "minmax" => Ok(Self::MinMax),
            "brute" => Ok(Self::Brute),
            _ => match s.split_once(':') {
                Some(("sodo", o)) if !o.is_empty() => Ok(Self::Sodo(o.to_string())),
                Some(("manual", n)) => Ok(Self::Manual(n.to_string())),
                _ => Err(format!("unknown method `{s}`; expected imap, minmax, sodo:<objective> or brute")),
            },
        }
    }
}

impl TryFrom<String> for MethodLabel {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<MethodLabel> for String {
    fn from(m: MethodLabel) -> Self {
        m.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub method: MethodLabel,
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
    pub preferences: Vec<f64>,
    pub feasible: bool,
    pub score: f64,
}

/// Designs side by side with their objectives, preferences and group score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub variables: Vec<String>,
    pub objectives: Vec<String>,
    /// `stakeholder/objective` for every preference column.
    pub criteria: Vec<String>,
    pub rows: Vec<ComparisonRow>,
    /// Row indices from best to worst.
    pub ranking: Vec<usize>,
}

impl ComparisonTable {
    pub fn row(&self, method: &MethodLabel) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| &r.method == method)
    }
}

/// Scores fixed designs against each other.
pub fn evaluate_alternatives(
    problem: &Problem,
    designs: &[(MethodLabel, Vec<f64>)],
) -> Result<ComparisonTable, SolverError> {
    if designs.len() < MIN_ALTERNATIVES {
        return Err(SolverError::TooFewAlternatives { required: MIN_ALTERNATIVES, found: designs.len() });
    }
    let mut rows = Vec::with_capacity(designs.len());
    for (method, x) in designs {
        let e = problem.evaluate(x)?;
        // Infeasible designs are still compared; their objectives must exist.
        let objectives = match e.objectives {
            Some(o) => o,
            None => problem.evaluate_objectives(x)?,
        };
        let preferences = problem.preferences_for(&objectives);
        rows.push(ComparisonRow {
            method: method.clone(),
            x: x.clone(),
            objectives,
            preferences,
            feasible: e.feasible,
            score: 0.0,
        });
    }
    let prefs: Vec<&[f64]> = rows.iter().map(|r| r.preferences.as_slice()).collect();
    let result = problem.aggregator().aggregate_rows(&prefs)?;
    for (row, s) in rows.iter_mut().zip(&result.aggregated) {
        row.score = *s;
    }
    let criteria = problem
        .criteria()
        .iter()
        .map(|c| format!("{}/{}", problem.stakeholders()[c.stakeholder].name, problem.objectives()[c.objective].name))
        .collect();
    Ok(ComparisonTable {
        variables: problem.variables().iter().map(|v| v.name.clone()).collect(),
        objectives: problem.objectives().iter().map(|o| o.name.clone()).collect(),
        criteria,
        rows,
        ranking: result.ranking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for s in ["imap", "minmax", "brute", "sodo:installation_costs", "manual:mine"] {
            let m: MethodLabel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("sodo:".parse::<MethodLabel>().is_err());
        assert!("simplex".parse::<MethodLabel>().is_err());
    }
}
