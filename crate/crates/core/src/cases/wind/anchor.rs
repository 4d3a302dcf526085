//! Suction anchor capacity and mass.
//!
//! The mooring chain runs from the padeye to the mudline through clay. Its
//! embedded part sheds tension by friction and turns the load upward, which
//! is captured by the inverse catenary pair
//!
//! ```text
//! theta = sqrt(2 z Q / T),   T = F exp(-mu theta)
//! ```
//!
//! solved by fixed-point iteration. The resulting horizontal and vertical
//! load components are checked against an elliptical capacity envelope.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math;

pub const MAX_ITERATIONS: usize = 100;
pub const ANGLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnchorError {
    #[error("padeye angle iteration did not converge in {0} steps")]
    NonConvergence(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorParams {
    /// Undrained shear strength, kPa.
    pub su: f64,
    /// Submerged unit weight, kN/m^3. Carried for completeness; installation
    /// checks are not modelled.
    pub gamma: f64,
    /// Skin friction factor.
    pub alpha: f64,
    /// Chain diameter, m.
    pub chain_diameter: f64,
    /// Chain-soil friction coefficient.
    pub mu: f64,
    /// Effective chain width multiplier for bearing.
    pub awb: f64,
    /// Padeye depth as a fraction of skirt length.
    pub padeye_depth: f64,
    /// Mooring load at the mudline, kN.
    pub load: f64,
    /// Lateral bearing factor.
    pub np: f64,
    /// Reverse end bearing factor.
    pub nc: f64,
    /// Wall thickness, m.
    pub wall_thickness: f64,
    /// Steel weight multiplier applied to the steel volume.
    pub w_steel: f64,
}

impl Default for AnchorParams {
    fn default() -> Self {
        Self {
            su: 60.0,
            gamma: 9.0,
            alpha: 0.64,
            chain_diameter: 0.240,
            mu: 0.25,
            awb: 2.5,
            padeye_depth: 0.5,
            load: 3800.0,
            np: 10.5,
            nc: 9.0,
            wall_thickness: 0.005,
            w_steel: 78.5,
        }
    }
}

/// Load state at the padeye and the resulting utilization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchorResponse {
    /// Chain angle at the padeye, rad.
    pub theta: f64,
    /// Chain tension at the padeye, kN.
    pub tension: f64,
    pub horizontal: f64,
    pub vertical: f64,
    pub horizontal_capacity: f64,
    pub vertical_capacity: f64,
    pub utilization: f64,
    pub iterations: usize,
}

/// Padeye angle and tension for an anchor with the given skirt length.
pub fn padeye_load(length: f64, params: &AnchorParams) -> Result<(f64, f64, usize), AnchorError> {
    let q = params.awb * params.chain_diameter * params.su;
    let z = params.padeye_depth * length;
    let mut theta = 0.0;
    for k in 1..=MAX_ITERATIONS {
        let tension = params.load * math::exp(-params.mu * theta);
        let next = math::sqrt(2.0 * z * q / tension);
        let step = (next - theta).abs();
        theta = next;
        if step < ANGLE_TOLERANCE {
            return Ok((theta, params.load * math::exp(-params.mu * theta), k));
        }
    }
    Err(AnchorError::NonConvergence(MAX_ITERATIONS))
}

pub fn response(diameter: f64, length: f64, params: &AnchorParams) -> Result<AnchorResponse, AnchorError> {
    let (theta, tension, iterations) = padeye_load(length, params)?;
    let horizontal = tension * math::cos(theta);
    let vertical = tension * math::sin(theta);
    let pi = core::f64::consts::PI;
    let horizontal_capacity = params.np * diameter * length * params.su;
    let vertical_capacity = params.alpha * params.su * pi * diameter * length
        + params.nc * params.su * pi / 4.0 * diameter * diameter;
    let h = horizontal / horizontal_capacity;
    let v = vertical / vertical_capacity;
    Ok(AnchorResponse {
        theta,
        tension,
        horizontal,
        vertical,
        horizontal_capacity,
        vertical_capacity,
        utilization: math::sqrt(h * h + v * v),
        iterations,
    })
}

/// Capacity utilization; at most 1 for an adequate anchor.
pub fn utilization(diameter: f64, length: f64, params: &AnchorParams) -> Result<f64, AnchorError> {
    Ok(response(diameter, length, params)?.utilization)
}

/// Steel mass in tonnes: skirt plus lid, times wall thickness and the steel
/// weight multiplier.
pub fn mass(diameter: f64, length: f64, params: &AnchorParams) -> f64 {
    let pi = core::f64::consts::PI;
    let area = pi * length * diameter + pi / 4.0 * diameter * diameter;
    area * params.wall_thickness * params.w_steel
}
