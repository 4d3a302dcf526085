//! Preference function modelling: curves, weights and aggregation.

mod aggregate;
mod curve;
mod weights;

pub use aggregate::{
    aggregate, aggregate_weighted, normalize_columns, rank, rescale, synthesize, AggregationResult,
    Aggregator, ScoreMatrix, EQUALITY_EPSILON,
};
pub use curve::{PreferenceCurve, PreferenceScore};
pub use weights::{WeightSet, NORMALIZATION_TOLERANCE};

/// Upper end of the preference scale.
pub const MAX_SCORE: f64 = 100.0;
