use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::pfm::{Aggregator, MAX_SCORE};

/// Scores within this distance of 100 count as top-ranked.
pub const TOP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Improved,
    Plateau,
    Regressed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub generation: usize,
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
    pub preferences: Vec<f64>,
}

/// Generation-best designs, re-aggregated as a population of their own
/// after every append. Scores are relative, so a later entry can only be
/// judged against earlier ones by aggregating them together.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    scores: Vec<f64>,
    best: Option<usize>,
    stall: usize,
}

fn is_top(score: f64) -> bool {
    score >= MAX_SCORE - TOP_TOLERANCE
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    /// Scores from the latest aggregation of the whole archive.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn best(&self) -> Option<&ArchiveEntry> {
        self.best.map(|i| &self.entries[i])
    }

    pub fn best_index(&self) -> Option<usize> {
        self.best
    }

    /// Generations since the last improvement.
    pub fn stall(&self) -> usize {
        self.stall
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Appends a generation best and judges it against the incumbent.
    ///
    /// The newest entry improves on the incumbent only if it takes the top
    /// score while the incumbent loses it. Sharing the top is a plateau;
    /// anything else is a regression. Both of the latter count towards the
    /// stall limit.
    pub fn update(&mut self, entry: ArchiveEntry, aggregator: &Aggregator) -> Result<Verdict, SolverError> {
        let incumbent = self.best;
        self.entries.push(entry);
        let newest = self.entries.len() - 1;
        let Some(incumbent) = incumbent else {
            self.scores = alloc::vec![MAX_SCORE];
            self.best = Some(0);
            self.stall = 0;
            return Ok(Verdict::Improved);
        };
        let rows: Vec<&[f64]> = self.entries.iter().map(|e| e.preferences.as_slice()).collect();
        let result = aggregator.aggregate_rows(&rows)?;
        let (new_score, old_score) = (result.aggregated[newest], result.aggregated[incumbent]);
        self.best = Some(result.ranking[0]);
        self.scores = result.aggregated;
        let verdict = match (is_top(new_score), is_top(old_score)) {
            (true, false) => Verdict::Improved,
            (true, true) => Verdict::Plateau,
            _ => Verdict::Regressed,
        };
        if verdict == Verdict::Improved {
            self.stall = 0;
        } else {
            self.stall += 1;
        }
        Ok(verdict)
    }
}
