use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::AggregationError;
use crate::pfm::{WeightSet, MAX_SCORE};

/// Spread below which a column or a population counts as constant.
pub const EQUALITY_EPSILON: f64 = 1e-9;

/// Preference scores, one row per alternative and one column per criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ScoreMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, AggregationError> {
        if data.len() != rows * cols {
            return Err(AggregationError::Ragged {
                row: data.len() / cols.max(1),
                expected: cols,
                found: data.len() % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, AggregationError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(AggregationError::Ragged { row, expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: rows.len(), cols: self.cols, data }
    }
}

/// Outcome of one aggregation over a population of alternatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregationResult {
    /// Column-normalized scores.
    pub normalized: ScoreMatrix,
    /// Weighted least-squares scalar per alternative, before rescaling.
    pub synthesized: Vec<f64>,
    /// Final group score per alternative on the 0 to 100 scale.
    pub aggregated: Vec<f64>,
    /// Alternative indices from best to worst.
    pub ranking: Vec<usize>,
}

impl AggregationResult {
    pub fn best(&self) -> usize {
        self.ranking[0]
    }
}

/// Rescales each column to `[0, 100]` over the alternatives.
///
/// A constant column carries no information about the relative order and
/// maps to 100 everywhere.
pub fn normalize_columns(scores: &ScoreMatrix) -> ScoreMatrix {
    let (rows, cols) = (scores.rows, scores.cols);
    let mut data = scores.data.clone();
    for j in 0..cols {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..rows {
            let v = scores.get(i, j);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let span = hi - lo;
        for i in 0..rows {
            let cell = &mut data[i * cols + j];
            *cell = if span <= EQUALITY_EPSILON {
                MAX_SCORE
            } else {
                (*cell - lo) / span * MAX_SCORE
            };
        }
    }
    ScoreMatrix { rows, cols, data }
}

/// The scalar `a` minimizing `sum_c w_c (a - p_c)^2` for each row.
///
/// Setting the derivative to zero gives the weighted mean, so no search is
/// needed.
pub fn synthesize(scores: &ScoreMatrix, weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    scores
        .iter_rows()
        .map(|row| row.iter().zip(weights).map(|(p, w)| p * w).sum::<f64>() / total)
        .collect()
}

/// Min-max rescale of a population to `[0, 100]`; an all-equal population
/// scores 100 throughout.
pub fn rescale(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    values
        .iter()
        .map(|v| {
            if span <= EQUALITY_EPSILON {
                MAX_SCORE
            } else {
                (v - lo) / span * MAX_SCORE
            }
        })
        .collect()
}

/// Indices by descending score, ties broken by ascending index.
pub fn rank(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order
}

/// Aggregates with explicit per-column weights.
///
/// The weights need not sum to one; they must be non-negative with a
/// positive total.
pub fn aggregate_weighted(
    scores: &ScoreMatrix,
    weights: &[f64],
) -> Result<AggregationResult, AggregationError> {
    if weights.len() != scores.cols {
        return Err(AggregationError::Shape { expected: weights.len(), found: scores.cols });
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || weights.iter().sum::<f64>() <= 0.0 {
        return Err(AggregationError::InvalidWeights);
    }
    if scores.rows < 2 {
        return Err(AggregationError::Degenerate { alternatives: scores.rows });
    }
    for i in 0..scores.rows {
        for j in 0..scores.cols {
            let value = scores.get(i, j);
            if !(0.0..=MAX_SCORE).contains(&value) {
                return Err(AggregationError::ScoreOutOfRange { row: i, column: j, value });
            }
        }
    }
    let normalized = normalize_columns(scores);
    let synthesized = synthesize(&normalized, weights);
    let aggregated = rescale(&synthesized);
    let ranking = rank(&aggregated);
    Ok(AggregationResult { normalized, synthesized, aggregated, ranking })
}

/// Aggregates a score matrix whose columns are the criteria of `weights`.
pub fn aggregate(
    scores: &ScoreMatrix,
    weights: &WeightSet,
) -> Result<AggregationResult, AggregationError> {
    aggregate_weighted(scores, &weights.criterion_weights())
}

/// Aggregation bound to one set of criterion weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregator {
    weights: Vec<f64>,
}

impl Aggregator {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn from_weight_set(weights: &WeightSet) -> Self {
        Self::new(weights.criterion_weights())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn aggregate(&self, scores: &ScoreMatrix) -> Result<AggregationResult, AggregationError> {
        aggregate_weighted(scores, &self.weights)
    }

    pub fn aggregate_rows<R: AsRef<[f64]>>(
        &self,
        rows: &[R],
    ) -> Result<AggregationResult, AggregationError> {
        self.aggregate(&ScoreMatrix::from_rows(rows)?)
    }
}
