use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::WeightError;

/// Allowed deviation of any weight sum from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Stakeholder weights, per-stakeholder objective weights and their product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    stakeholder: Vec<f64>,
    objective: Vec<Vec<f64>>,
    combined: Vec<Vec<f64>>,
}

impl WeightSet {
    /// Builds `w'[k][i] = w[k] * w[k][i]` after checking every normalization.
    pub fn combine(stakeholder: Vec<f64>, objective: Vec<Vec<f64>>) -> Result<Self, WeightError> {
        if stakeholder.is_empty() {
            return Err(WeightError::Empty);
        }
        if objective.len() != stakeholder.len() {
            return Err(WeightError::Shape {
                expected: stakeholder.len(),
                found: objective.len(),
            });
        }
        let width = objective[0].len();
        for (k, &w) in stakeholder.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(WeightError::Invalid { stakeholder: k, objective: usize::MAX });
            }
        }
        let sum: f64 = stakeholder.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(WeightError::StakeholderNormalization { sum });
        }
        for (k, row) in objective.iter().enumerate() {
            if row.len() != width {
                return Err(WeightError::RowLength {
                    stakeholder: k,
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(i) = row.iter().position(|w| !w.is_finite() || *w < 0.0) {
                return Err(WeightError::Invalid { stakeholder: k, objective: i });
            }
            // An all-zero row is a stakeholder without objectives, which is
            // rejected by the same check.
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(WeightError::ObjectiveNormalization { stakeholder: k, sum });
            }
        }
        let combined: Vec<Vec<f64>> = stakeholder
            .iter()
            .zip(&objective)
            .map(|(wk, row)| row.iter().map(|w| wk * w).collect())
            .collect();
        let sum: f64 = combined.iter().flatten().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(WeightError::CombinedNormalization { sum });
        }
        Ok(Self { stakeholder, objective, combined })
    }

    pub fn stakeholder_weights(&self) -> &[f64] {
        &self.stakeholder
    }

    pub fn objective_weights(&self) -> &[Vec<f64>] {
        &self.objective
    }

    pub fn combined(&self) -> &[Vec<f64>] {
        &self.combined
    }

    /// The `(stakeholder, objective)` pairs with a nonzero combined weight,
    /// in row-major order. These are the criteria of a score matrix.
    pub fn criteria(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, row) in self.combined.iter().enumerate() {
            for (i, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    out.push((k, i));
                }
            }
        }
        out
    }

    /// Combined weights aligned with [`WeightSet::criteria`].
    pub fn criterion_weights(&self) -> Vec<f64> {
        self.criteria().into_iter().map(|(k, i)| self.combined[k][i]).collect()
    }
}
