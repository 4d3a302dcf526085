//! Rail level-crossing transition zone.
//!
//! Sleeper spacing `x1` (m) and sleeper count `x2` drive the peak wheel-rail
//! force `F` (kN) and the peak acceleration `a` (m/s^2). The finite-element
//! data behind those quantities is not public, so a smooth surrogate is
//! tabulated on a 9 x 12 grid instead.

use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::error::HookError;
use crate::hooks::{HookEnv, HookRegistry};
use crate::math;
use crate::problem::{HookInputs, SharedHook, TabulatedGrid};

/// Multiplier turning the normalized dynamic load into euros per year.
pub const MAINTENANCE_SCALE: f64 = 15_000.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RailError {
    #[error("normalization bounds for {quantity} are degenerate (min = max = {value})")]
    DegenerateBounds { quantity: &'static str, value: f64 },
}

/// Surrogate peak force in kN.
pub fn surrogate_force(x1: f64, x2: f64) -> f64 {
    let (s, n) = scaled(x1, x2);
    120.0 + 260.0 * s * s * s - 15.0 * n
}

/// Surrogate peak acceleration in m/s^2.
pub fn surrogate_acceleration(x1: f64, x2: f64) -> f64 {
    let (s, n) = scaled(x1, x2);
    0.8 + 2.4 * math::powf(s, 2.5) - 0.2 * n
}

fn scaled(x1: f64, x2: f64) -> (f64, f64) {
    ((x1 - 0.3) / 0.4, (x2 - 4.0) / 11.0)
}

/// Force and acceleration tables over the sleeper design space.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsGrid {
    pub force: TabulatedGrid,
    pub acceleration: TabulatedGrid,
}

impl DynamicsGrid {
    pub fn spacing_axis() -> Vec<f64> {
        (0..9).map(|i| f64::from(30 + 5 * i) / 100.0).collect()
    }

    pub fn count_axis() -> Vec<f64> {
        (4..=15).map(f64::from).collect()
    }

    /// The shipped surrogate tables.
    pub fn surrogate() -> Self {
        let xs = Self::spacing_axis();
        let ns = Self::count_axis();
        let table = |f: fn(f64, f64) -> f64| {
            let values = xs.iter().flat_map(|&x| ns.iter().map(move |&n| f(x, n))).collect();
            TabulatedGrid::new(xs.clone(), ns.clone(), values).expect("surrogate grid is well formed")
        };
        Self { force: table(surrogate_force), acceleration: table(surrogate_acceleration) }
    }

    pub fn interpolate(&self, x1: f64, x2: f64) -> Result<(f64, f64), crate::problem::GridError> {
        Ok((self.force.interpolate(x1, x2)?, self.acceleration.interpolate(x1, x2)?))
    }

    pub fn bounds(&self) -> Result<NormalizationBounds, RailError> {
        NormalizationBounds::new(
            (self.force.min(), self.force.max()),
            (self.acceleration.min(), self.acceleration.max()),
        )
    }
}

/// Extremes of force and acceleration used to normalize both to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationBounds {
    pub force: (f64, f64),
    pub acceleration: (f64, f64),
}

impl NormalizationBounds {
    pub fn new(force: (f64, f64), acceleration: (f64, f64)) -> Result<Self, RailError> {
        for (quantity, (lo, hi)) in [("force", force), ("acceleration", acceleration)] {
            if hi.partial_cmp(&lo) != Some(core::cmp::Ordering::Greater) {
                return Err(RailError::DegenerateBounds { quantity, value: lo });
            }
        }
        Ok(Self { force, acceleration })
    }

    pub fn normalized_force(&self, f: f64) -> f64 {
        (f - self.force.0) / (self.force.1 - self.force.0)
    }

    pub fn normalized_acceleration(&self, a: f64) -> f64 {
        (a - self.acceleration.0) / (self.acceleration.1 - self.acceleration.0)
    }
}

/// Yearly maintenance cost in euros.
pub fn maintenance_cost(force: f64, acceleration: f64, bounds: &NormalizationBounds) -> f64 {
    let f = bounds.normalized_force(force);
    let a = bounds.normalized_acceleration(acceleration);
    math::sqrt(f * f + a * a) * MAINTENANCE_SCALE
}

/// Travel comfort on `[0, 1]`, 1 being the smoothest ride.
pub fn travel_comfort(acceleration: f64, bounds: &NormalizationBounds) -> f64 {
    1.0 - bounds.normalized_acceleration(acceleration)
}

/// Investment cost in euros.
pub fn investment_cost(spacing: f64, count: f64) -> f64 {
    1000.0 * count - 350.0 * spacing * count
}

/// Names used when a rail hook is referenced without an argument.
pub const DEFAULT_NAMES: [&str; 4] = ["force", "acceleration", "sleeper_spacing", "sleeper_count"];

fn names<'a, const N: usize>(env: &HookEnv<'a>, defaults: [&'a str; N]) -> Result<[&'a str; N], HookError> {
    let Some(arg) = env.argument else { return Ok(defaults) };
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    parts.try_into().map_err(|_| HookError::InvalidParameter {
        hook: env.hook.into(),
        name: "argument".into(),
        message: alloc::format!("expected {N} comma-separated names"),
    })
}

fn grid_bounds(env: &HookEnv<'_>, force: &str, acceleration: &str) -> Result<NormalizationBounds, HookError> {
    let (f, a) = (env.grid(force)?, env.grid(acceleration)?);
    NormalizationBounds::new((f.min(), f.max()), (a.min(), a.max())).map_err(|e| {
        HookError::InvalidParameter { hook: env.hook.into(), name: "grid".into(), message: alloc::format!("{e}") }
    })
}

/// Registers `rail.maintenance_cost`, `rail.travel_comfort` and
/// `rail.investment_cost`. Normalization bounds are the extremes of the
/// tabulated force and acceleration grids.
pub fn register_hooks(registry: &mut HookRegistry) {
    registry.register("rail.maintenance_cost", |env| {
        let [force, acceleration] = names(env, [DEFAULT_NAMES[0], DEFAULT_NAMES[1]])?;
        let bounds = grid_bounds(env, force, acceleration)?;
        let (fi, ai) = (env.performance(force)?, env.performance(acceleration)?);
        Ok(Arc::new(move |inp: &HookInputs<'_>| {
            Ok(maintenance_cost(inp.performance[fi], inp.performance[ai], &bounds))
        }) as SharedHook)
    });
    registry.register("rail.travel_comfort", |env| {
        let [force, acceleration] = names(env, [DEFAULT_NAMES[0], DEFAULT_NAMES[1]])?;
        let bounds = grid_bounds(env, force, acceleration)?;
        let ai = env.performance(acceleration)?;
        Ok(Arc::new(move |inp: &HookInputs<'_>| Ok(travel_comfort(inp.performance[ai], &bounds)))
            as SharedHook)
    });
    registry.register("rail.investment_cost", |env| {
        let [spacing, count] = names(env, [DEFAULT_NAMES[2], DEFAULT_NAMES[3]])?;
        let (si, ci) = (env.variable(spacing)?, env.variable(count)?);
        Ok(Arc::new(move |inp: &HookInputs<'_>| Ok(investment_cost(inp.x[si], inp.x[ci])))
            as SharedHook)
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_bounds() -> NormalizationBounds {
        NormalizationBounds::new((100.0, 200.0), (1.0, 3.0)).unwrap()
    }

    #[test]
    fn maintenance_corners() {
        let b = unit_bounds();
        assert_eq!(maintenance_cost(100.0, 1.0, &b), 0.0);
        assert!((maintenance_cost(200.0, 3.0, &b) - 15000.0 * core::f64::consts::SQRT_2).abs() < 1e-9);
        assert!((maintenance_cost(160.0, 2.6, &b) - 15000.0).abs() < 1e-9);
    }

    #[test]
    fn comfort_corners() {
        let b = unit_bounds();
        assert_eq!(travel_comfort(1.0, &b), 1.0);
        assert_eq!(travel_comfort(3.0, &b), 0.0);
        assert_eq!(travel_comfort(1.5, &b), 0.75);
    }

    #[test]
    fn degenerate_bounds() {
        assert!(matches!(
            NormalizationBounds::new((1.0, 1.0), (0.0, 1.0)),
            Err(RailError::DegenerateBounds { quantity: "force", .. })
        ));
    }

    #[test]
    fn investment_values() {
        assert_eq!(investment_cost(0.70, 4.0), 3020.0);
        assert_eq!(investment_cost(0.38, 4.0), 3468.0);
        assert_eq!(investment_cost(0.35, 5.0), 4387.5);
    }

    #[test]
    fn investment_is_monotone_on_the_box() {
        for i in 0..=40 {
            let x1 = 0.3 + 0.01 * f64::from(i);
            for n in 4..15 {
                let n = f64::from(n);
                assert!(investment_cost(x1, n + 1.0) > investment_cost(x1, n));
                assert!(investment_cost(x1 + 0.005, n) < investment_cost(x1, n));
            }
        }
    }

    #[test]
    fn surrogate_grid_shape_and_hull() {
        let g = DynamicsGrid::surrogate();
        assert_eq!(g.force.x_axis().len(), 9);
        assert_eq!(g.force.y_axis().len(), 12);
        assert!(g.force.values().iter().all(|v| *v > 0.0));
        assert!(g.acceleration.values().iter().all(|v| *v > 0.0));
        let b = g.bounds().unwrap();
        for i in 0..=80 {
            let x1 = 0.3 + 0.005 * f64::from(i);
            for n in 4..=15 {
                let (f, a) = g.interpolate(x1.min(0.7), f64::from(n)).unwrap();
                let m = maintenance_cost(f, a, &b);
                let c = travel_comfort(a, &b);
                assert!((0.0..=15000.0 * core::f64::consts::SQRT_2 + 1e-9).contains(&m));
                assert!((0.0..=1.0).contains(&c));
            }
        }
    }

    #[test]
    fn nodes_reproduce_the_formula() {
        let g = DynamicsGrid::surrogate();
        let (f, a) = g.interpolate(0.45, 9.0).unwrap();
        assert_eq!(f, surrogate_force(0.45, 9.0));
        assert_eq!(a, surrogate_acceleration(0.45, 9.0));
    }
}
