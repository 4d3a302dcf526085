use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::pfm::MAX_SCORE;

/// A score on the 0 to 100 preference scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PreferenceScore(f64);

impl PreferenceScore {
    pub const MIN: Self = Self(0.0);
    pub const MAX: Self = Self(MAX_SCORE);

    pub fn new(value: f64) -> Option<Self> {
        (0.0..=MAX_SCORE).contains(&value).then_some(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PreferenceScore {
    type Error = CurveError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Self::new(value).ok_or(CurveError::ScoreOutOfRange { index: 0, score: value })
    }
}

impl From<PreferenceScore> for f64 {
    fn from(score: PreferenceScore) -> f64 {
        score.0
    }
}

impl fmt::Display for PreferenceScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Piecewise-linear map from an objective value to a preference score.
///
/// Between knots the score is interpolated linearly. Outside the knot range
/// the nearest endpoint score is returned, so every evaluation stays inside
/// `[0, 100]` without extra constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PreferenceCurve {
    knots: Vec<(f64, f64)>,
}

impl PreferenceCurve {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, CurveError> {
        if knots.len() < 2 {
            return Err(CurveError::TooFewKnots(knots.len()));
        }
        for (index, &(o, p)) in knots.iter().enumerate() {
            if !o.is_finite() || !p.is_finite() {
                return Err(CurveError::NotFinite { index });
            }
            if !(0.0..=MAX_SCORE).contains(&p) {
                return Err(CurveError::ScoreOutOfRange { index, score: p });
            }
            if index > 0 && o <= knots[index - 1].0 {
                return Err(CurveError::NotIncreasing { index });
            }
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn evaluate(&self, objective: f64) -> f64 {
        let first = self.knots[0];
        let last = self.knots[self.knots.len() - 1];
        if objective <= first.0 {
            return first.1;
        }
        if objective >= last.0 {
            return last.1;
        }
        // First knot strictly to the right of the query.
        let hi = self.knots.partition_point(|&(o, _)| o <= objective);
        let (o0, p0) = self.knots[hi - 1];
        let (o1, p1) = self.knots[hi];
        let t = (objective - o0) / (o1 - o0);
        p0 + t * (p1 - p0)
    }

    pub fn score(&self, objective: f64) -> PreferenceScore {
        PreferenceScore(self.evaluate(objective))
    }

    /// True when the best score sits at the low end of the objective range.
    pub fn prefers_low(&self) -> bool {
        let (lo, hi) = (self.knots[0].1, self.knots[self.knots.len() - 1].1);
        lo > hi
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0].0, self.knots[self.knots.len() - 1].0)
    }
}

impl TryFrom<Vec<(f64, f64)>> for PreferenceCurve {
    type Error = CurveError;

    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self, Self::Error> {
        Self::new(knots)
    }
}

impl From<PreferenceCurve> for Vec<(f64, f64)> {
    fn from(curve: PreferenceCurve) -> Self {
        curve.knots
    }
}
