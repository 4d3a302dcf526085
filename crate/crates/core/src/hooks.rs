//! Named factories for coded functions referenced from problem documents.
//!
//! A hook reference is a registered name, optionally followed by `:` and an
//! argument, for example `value:force` or `rail.investment_cost`. Factories
//! run once when a problem is loaded and resolve every name they need into
//! an index, so evaluation never looks anything up by string.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::HookError;
use crate::problem::{
    DesignVariable, Exogenous, HookInputs, NamedHook, PerformanceFunction, PerformanceKind,
    SharedHook, TabulatedGrid,
};

/// The parts of a problem visible while hooks are resolved.
#[derive(Debug, Clone, Copy)]
pub struct HookContext<'a> {
    pub variables: &'a [DesignVariable],
    pub exogenous: &'a Exogenous,
    /// Performance functions declared so far.
    pub performance: &'a [PerformanceFunction],
    pub objectives: &'a [String],
}

/// A single resolution request.
#[derive(Debug, Clone, Copy)]
pub struct HookEnv<'a> {
    pub hook: &'a str,
    pub argument: Option<&'a str>,
    pub context: &'a HookContext<'a>,
}

impl HookEnv<'_> {
    pub fn variable(&self, name: &str) -> Result<usize, HookError> {
        self.context.variables.iter().position(|v| v.name == name).ok_or_else(|| {
            HookError::InvalidParameter {
                hook: self.hook.into(),
                name: name.into(),
                message: "no design variable with this name".into(),
            }
        })
    }

    pub fn performance(&self, name: &str) -> Result<usize, HookError> {
        self.context
            .performance
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| HookError::UnknownPerformance { hook: self.hook.into(), name: name.into() })
    }

    pub fn grid(&self, name: &str) -> Result<&TabulatedGrid, HookError> {
        match &self.context.performance[self.performance(name)?].kind {
            PerformanceKind::Grid { grid, .. } => Ok(grid),
            _ => Err(HookError::NotAGrid { hook: self.hook.into(), name: name.into() }),
        }
    }

    pub fn objective(&self, name: &str) -> Result<usize, HookError> {
        self.context
            .objectives
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| HookError::UnknownObjective { hook: self.hook.into(), name: name.into() })
    }

    pub fn exogenous_or(&self, name: &str, default: f64) -> f64 {
        self.context.exogenous.get_or(name, default)
    }

    pub fn require_argument(&self) -> Result<&str, HookError> {
        self.argument.ok_or_else(|| HookError::InvalidParameter {
            hook: self.hook.into(),
            name: "argument".into(),
            message: "this hook needs an argument after `:`".into(),
        })
    }
}

pub type HookFactory = Arc<dyn Fn(&HookEnv<'_>) -> Result<SharedHook, HookError> + Send + Sync>;

#[derive(Clone, Default)]
pub struct HookRegistry {
    factories: BTreeMap<String, HookFactory>,
}

impl fmt::Debug for HookRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.factories.keys()).finish()
    }
}

impl HookRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Generic hooks plus the rail and floating-wind models.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("value", |env| {
            let i = env.performance(env.require_argument()?)?;
            Ok(Arc::new(move |inp: &HookInputs<'_>| Ok(inp.performance[i])) as SharedHook)
        });
        r.register("variable", |env| {
            let i = env.variable(env.require_argument()?)?;
            Ok(Arc::new(move |inp: &HookInputs<'_>| Ok(inp.x[i])) as SharedHook)
        });
        r.register("objective", |env| {
            let i = env.objective(env.require_argument()?)?;
            Ok(Arc::new(move |inp: &HookInputs<'_>| inp.objective(i)) as SharedHook)
        });
        r.register("sum_of_squares", |_| {
            Ok(Arc::new(|inp: &HookInputs<'_>| Ok(inp.x.iter().map(|v| v * v).sum())) as SharedHook)
        });
        crate::cases::rail::register_hooks(&mut r);
        crate::cases::wind::register_hooks(&mut r);
        r
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&HookEnv<'_>) -> Result<SharedHook, HookError> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    /// Resolves a hook reference such as `value:force`.
    pub fn resolve(&self, reference: &str, context: &HookContext<'_>) -> Result<NamedHook, HookError> {
        let (name, argument) = match reference.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (reference, None),
        };
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| HookError::UnknownHook(reference.into()))?;
        let env = HookEnv { hook: reference, argument, context };
        Ok(NamedHook::new(reference, factory(&env)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn resolves_generic_hooks() {
        let variables = vec![DesignVariable::continuous("x", -1.0, 1.0).unwrap()];
        let performance =
            vec![PerformanceFunction { name: "p".into(), kind: PerformanceKind::Variable(0) }];
        let exogenous = Exogenous::default();
        let ctx = HookContext { variables: &variables, exogenous: &exogenous, performance: &performance, objectives: &[] };
        let r = HookRegistry::with_builtins();
        let inputs = HookInputs { x: &[0.5], performance: &[0.25], objectives: None };
        assert_eq!(r.resolve("value:p", &ctx).unwrap().hook.call(&inputs), Ok(0.25));
        assert_eq!(r.resolve("variable:x", &ctx).unwrap().hook.call(&inputs), Ok(0.5));
        assert_eq!(r.resolve("sum_of_squares", &ctx).unwrap().hook.call(&inputs), Ok(0.25));
    }

    #[test]
    fn reports_unknown_references() {
        let exogenous = Exogenous::default();
        let ctx = HookContext { variables: &[], exogenous: &exogenous, performance: &[], objectives: &[] };
        let r = HookRegistry::with_builtins();
        assert_eq!(
            r.resolve("no_such_fn", &ctx).unwrap_err(),
            HookError::UnknownHook("no_such_fn".into())
        );
        assert!(matches!(r.resolve("value:q", &ctx), Err(HookError::UnknownPerformance { .. })));
        assert!(matches!(r.resolve("value", &ctx), Err(HookError::InvalidParameter { .. })));
    }
}
