//! Reference methods the IMAP result is compared against.

mod brute;
mod minmax;
mod sodo;
mod table;

pub use brute::{brute_force_imap, BruteForce, GridSpec, MAX_GRID_POINTS};
pub use minmax::{minmax_value, run_minmax};
pub use sodo::{infer_direction, run_sodo, Direction};
pub use table::{evaluate_alternatives, ComparisonRow, ComparisonTable, MethodLabel, MIN_ALTERNATIVES};
