//! Floating-wind anchor installation.
//!
//! Design variables are the number of small OCVs, large OCVs and barges in
//! the installation fleet plus the suction anchor diameter and skirt length.

pub mod anchor;
pub mod des;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{EvaluationError, HookError};
use crate::hooks::{HookEnv, HookRegistry};
use crate::math;
use crate::problem::{HookInputs, SharedHook};

pub use anchor::{AnchorError, AnchorParams, AnchorResponse};
pub use des::{run_des, DesError, DesEvent, DesResult, EventKind, VesselSpec};

pub const DEFAULT_ANCHORS: u32 = 108;
/// Fixed cost per anchor, euros.
pub const DEFAULT_ANCHOR_FIXED_COST: f64 = 40_000.0;
/// Fabrication cost per tonne of steel, euros.
pub const DEFAULT_STEEL_COST: f64 = 815.0;

/// Variable names the wind hooks look up.
pub const VARIABLES: [&str; 5] =
    ["n_small_ocv", "n_large_ocv", "n_barge", "anchor_diameter", "anchor_length"];

/// Every model constant of the case, with exogenous overrides applied.
#[derive(Debug, Clone, PartialEq)]
pub struct WindParams {
    pub vessels: Vec<VesselSpec>,
    pub anchor: AnchorParams,
    pub anchors: u32,
    pub anchor_fixed_cost: f64,
    pub steel_cost: f64,
}

impl Default for WindParams {
    fn default() -> Self {
        Self {
            vessels: VesselSpec::default_fleet(),
            anchor: AnchorParams::default(),
            anchors: DEFAULT_ANCHORS,
            anchor_fixed_cost: DEFAULT_ANCHOR_FIXED_COST,
            steel_cost: DEFAULT_STEEL_COST,
        }
    }
}

impl WindParams {
    /// Reads overrides such as `barge.day_rate` or `anchor.su`; anything not
    /// given keeps its default.
    pub fn from_lookup(get: impl Fn(&str) -> Option<f64>) -> Self {
        let mut p = Self::default();
        for v in &mut p.vessels {
            let key = |field: &str| alloc::format!("{}.{field}", v.name);
            if let Some(c) = get(&key("capacity")) {
                v.capacity = c as u32;
            }
            v.reload_days = get(&key("reload_days")).unwrap_or(v.reload_days);
            v.day_rate = get(&key("day_rate")).unwrap_or(v.day_rate);
            v.reassignment_probability =
                get(&key("reassignment_probability")).unwrap_or(v.reassignment_probability);
            v.emission_rate = get(&key("emission_rate")).unwrap_or(v.emission_rate);
        }
        let a = &mut p.anchor;
        for (name, slot) in [
            ("anchor.su", &mut a.su),
            ("anchor.gamma", &mut a.gamma),
            ("anchor.alpha", &mut a.alpha),
            ("anchor.chain_diameter", &mut a.chain_diameter),
            ("anchor.mu", &mut a.mu),
            ("anchor.awb", &mut a.awb),
            ("anchor.padeye_depth", &mut a.padeye_depth),
            ("anchor.load", &mut a.load),
            ("anchor.np", &mut a.np),
            ("anchor.nc", &mut a.nc),
            ("anchor.wall_thickness", &mut a.wall_thickness),
            ("anchor.w_steel", &mut a.w_steel),
            ("anchor_fixed_cost", &mut p.anchor_fixed_cost),
            ("steel_cost", &mut p.steel_cost),
        ] {
            if let Some(v) = get(name) {
                *slot = v;
            }
        }
        if let Some(n) = get("n_anchors") {
            p.anchors = n as u32;
        }
        p
    }

    pub fn validate(&self) -> Result<(), String> {
        for v in &self.vessels {
            let ok = v.capacity >= 1
                && v.reload_days >= 0.0
                && v.day_rate >= 0.0
                && v.emission_rate >= 0.0
                && v.reassignment_probability > 0.0
                && v.reassignment_probability <= 1.0;
            if !ok {
                return Err(alloc::format!("vessel `{}` has an invalid specification", v.name));
            }
        }
        let a = &self.anchor;
        let positive = [a.su, a.alpha, a.chain_diameter, a.awb, a.padeye_depth, a.load, a.np, a.nc, a.w_steel];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || a.mu < 0.0 || a.wall_thickness < 0.0 {
            return Err("anchor parameters must be positive".into());
        }
        Ok(())
    }
}

/// Project duration in days.
pub fn project_duration(des: &DesResult) -> f64 {
    des.duration
}

/// Vessel cost in euros from per-class busy times.
pub fn vessel_cost(counts: &[u32], class_times: &[f64], specs: &[VesselSpec]) -> f64 {
    counts
        .iter()
        .zip(class_times)
        .zip(specs)
        .map(|((&n, &t), s)| f64::from(n) * t * s.day_rate)
        .sum()
}

/// Installation cost in euros: anchors plus vessel days.
pub fn installation_costs(
    counts: &[u32],
    class_times: &[f64],
    anchor_mass: f64,
    params: &WindParams,
) -> f64 {
    let anchors = (params.steel_cost * anchor_mass + params.anchor_fixed_cost) * f64::from(params.anchors);
    anchors + vessel_cost(counts, class_times, &params.vessels)
}

/// Probability that every chartered vessel would have been better used
/// elsewhere.
pub fn fleet_utilisation(counts: &[u32], specs: &[VesselSpec]) -> f64 {
    counts
        .iter()
        .zip(specs)
        .map(|(&n, s)| math::powf(s.reassignment_probability, f64::from(n)))
        .product()
}

/// CO2 emissions in tonnes.
pub fn co2_emissions(counts: &[u32], class_times: &[f64], specs: &[VesselSpec]) -> f64 {
    counts
        .iter()
        .zip(class_times)
        .zip(specs)
        .map(|((&n, &t), s)| f64::from(n) * s.emission_rate * t)
        .sum()
}

/// At least one vessel: `1 - sum(counts) <= 0`.
pub fn min_vessels(counts: &[u32]) -> f64 {
    1.0 - counts.iter().map(|&n| f64::from(n)).sum::<f64>()
}

/// Everything the case needs from one design, computed in one pass.
#[derive(Debug, Clone, PartialEq)]
pub struct WindOutcome {
    pub des: DesResult,
    pub class_times: Vec<f64>,
    pub anchor_mass: f64,
    pub project_duration: f64,
    pub installation_costs: f64,
    pub fleet_utilisation: f64,
    pub co2_emissions: f64,
}

pub fn outcome(counts: &[u32], diameter: f64, length: f64, params: &WindParams) -> Result<WindOutcome, DesError> {
    let des = run_des(counts, &params.vessels, params.anchors)?;
    let class_times = des.class_times(params.vessels.len());
    let anchor_mass = anchor::mass(diameter, length, &params.anchor);
    Ok(WindOutcome {
        project_duration: project_duration(&des),
        installation_costs: installation_costs(counts, &class_times, anchor_mass, params),
        fleet_utilisation: fleet_utilisation(counts, &params.vessels),
        co2_emissions: co2_emissions(counts, &class_times, &params.vessels),
        anchor_mass,
        class_times,
        des,
    })
}

struct Layout {
    counts: [usize; 3],
    diameter: usize,
    length: usize,
}

impl Layout {
    fn resolve(env: &HookEnv<'_>) -> Result<Self, HookError> {
        Ok(Self {
            counts: [env.variable(VARIABLES[0])?, env.variable(VARIABLES[1])?, env.variable(VARIABLES[2])?],
            diameter: env.variable(VARIABLES[3])?,
            length: env.variable(VARIABLES[4])?,
        })
    }

    fn counts(&self, x: &[f64]) -> [u32; 3] {
        self.counts.map(|i| x[i] as u32)
    }
}

fn params(env: &HookEnv<'_>) -> Result<WindParams, HookError> {
    let p = WindParams::from_lookup(|name| env.context.exogenous.get(name));
    p.validate().map_err(|message| HookError::InvalidParameter {
        hook: env.hook.into(),
        name: "exogenous".into(),
        message,
    })?;
    Ok(p)
}

type Pick = fn(&WindOutcome) -> f64;

fn outcome_hook(registry: &mut HookRegistry, name: &str, pick: Pick) {
    registry.register(name, move |env| {
        let layout = Layout::resolve(env)?;
        let p = params(env)?;
        Ok(Arc::new(move |inp: &HookInputs<'_>| {
            let o = outcome(&layout.counts(inp.x), inp.x[layout.diameter], inp.x[layout.length], &p)
                .map_err(EvaluationError::from)?;
            Ok(pick(&o))
        }) as SharedHook)
    });
}

/// Registers the `wind.*` objective, performance and constraint hooks.
pub fn register_hooks(registry: &mut HookRegistry) {
    outcome_hook(registry, "wind.project_duration", |o| o.project_duration);
    outcome_hook(registry, "wind.installation_costs", |o| o.installation_costs);
    outcome_hook(registry, "wind.co2_emissions", |o| o.co2_emissions);
    registry.register("wind.fleet_utilisation", |env| {
        let layout = Layout::resolve(env)?;
        let p = params(env)?;
        Ok(Arc::new(move |inp: &HookInputs<'_>| Ok(fleet_utilisation(&layout.counts(inp.x), &p.vessels)))
            as SharedHook)
    });
    registry.register("wind.min_vessels", |env| {
        let layout = Layout::resolve(env)?;
        Ok(Arc::new(move |inp: &HookInputs<'_>| Ok(min_vessels(&layout.counts(inp.x)))) as SharedHook)
    });
    registry.register("wind.anchor_mass", |env| {
        let layout = Layout::resolve(env)?;
        let p = params(env)?;
        Ok(Arc::new(move |inp: &HookInputs<'_>| {
            Ok(anchor::mass(inp.x[layout.diameter], inp.x[layout.length], &p.anchor))
        }) as SharedHook)
    });
    registry.register("wind.anchor_utilization", |env| {
        let layout = Layout::resolve(env)?;
        let p = params(env)?;
        Ok(Arc::new(move |inp: &HookInputs<'_>| {
            Ok(anchor::utilization(inp.x[layout.diameter], inp.x[layout.length], &p.anchor)?)
        }) as SharedHook)
    });
    // Capacity check in `<= 0` form.
    registry.register("wind.anchor_capacity", |env| {
        let layout = Layout::resolve(env)?;
        let p = params(env)?;
        Ok(Arc::new(move |inp: &HookInputs<'_>| {
            Ok(anchor::utilization(inp.x[layout.diameter], inp.x[layout.length], &p.anchor)? - 1.0)
        }) as SharedHook)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specs() -> Vec<VesselSpec> {
        VesselSpec::default_fleet()
    }

    #[test]
    fn fleet_utilisation_products() {
        assert_eq!(fleet_utilisation(&[0, 0, 1], &specs()), 0.5);
        assert!((fleet_utilisation(&[1, 0, 1], &specs()) - 0.35).abs() < 1e-15);
        assert_eq!(fleet_utilisation(&[0, 0, 0], &specs()), 1.0);
        assert!((fleet_utilisation(&[1, 0, 2], &specs()) - 0.175).abs() < 1e-15);
    }

    #[test]
    fn emissions_at_given_busy_times() {
        assert_eq!(co2_emissions(&[0, 0, 1], &[0.0, 0.0, 110.5], &specs()), 3867.5);
        assert_eq!(co2_emissions(&[0, 0, 1], &[0.0, 0.0, 123.0], &specs()), 4305.0);
        assert_eq!(co2_emissions(&[1, 1, 1], &[0.0; 3], &specs()), 0.0);
    }

    #[test]
    fn cost_examples() {
        let p = WindParams::default();
        let m = anchor::mass(2.2, 8.0, &p.anchor);
        let c = installation_costs(&[0, 0, 1], &[0.0, 0.0, 123.0], m, &p);
        assert!((c - (108.0 * (815.0 * m + 40_000.0) + 123.0 * 35_000.0)).abs() < 1e-6);
        assert!((c - 10.67e6).abs() < 0.01e6);
        let none = WindParams { anchors: 0, ..WindParams::default() };
        assert_eq!(installation_costs(&[0, 0, 1], &[0.0, 0.0, 10.0], m, &none), 350_000.0);
        assert_eq!(installation_costs(&[0, 0, 0], &[0.0; 3], 0.0, &p), 4.32e6);
    }

    #[test]
    fn min_vessel_constraint() {
        assert_eq!(min_vessels(&[0, 0, 0]), 1.0);
        assert_eq!(min_vessels(&[1, 0, 0]), 0.0);
        assert_eq!(min_vessels(&[1, 0, 2]), -2.0);
    }

    #[test]
    fn emissions_and_vessel_cost_share_busy_times() {
        let p = WindParams::default();
        for counts in [[0, 0, 1], [1, 0, 2], [3, 2, 2], [2, 1, 0]] {
            let o = outcome(&counts, 2.0, 5.0, &p).unwrap();
            let t = &o.class_times;
            let manual_s: f64 = (0..3).map(|i| f64::from(counts[i]) * p.vessels[i].emission_rate * t[i]).sum();
            let manual_c: f64 = (0..3).map(|i| f64::from(counts[i]) * p.vessels[i].day_rate * t[i]).sum();
            assert!((o.co2_emissions - manual_s).abs() <= 1e-9 * manual_s.max(1.0));
            let vessel_part = o.installation_costs
                - f64::from(p.anchors) * (p.steel_cost * o.anchor_mass + p.anchor_fixed_cost);
            assert!((vessel_part - manual_c).abs() <= 1e-9 * manual_c.max(1.0));
        }
    }

    #[test]
    fn overrides_apply() {
        let p = WindParams::from_lookup(|k| match k {
            "barge.day_rate" => Some(1.0),
            "anchor.wall_thickness" => Some(0.01),
            "n_anchors" => Some(10.0),
            _ => None,
        });
        assert_eq!(p.vessels[2].day_rate, 1.0);
        assert_eq!(p.anchor.wall_thickness, 0.01);
        assert_eq!(p.anchors, 10);
        assert!(p.validate().is_ok());
    }
}
