//! Models behind the two bundled case studies.

pub mod rail;
pub mod wind;
