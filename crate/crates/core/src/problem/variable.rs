use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Deref;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ProblemError;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableKind {
    Continuous,
    Integer,
}

/// A bounded design variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignVariable {
    pub name: String,
    pub kind: VariableKind,
    pub lower: f64,
    pub upper: f64,
}

impl DesignVariable {
    pub fn new(
        name: impl Into<String>,
        kind: VariableKind,
        lower: f64,
        upper: f64,
    ) -> Result<Self, ProblemError> {
        let v = Self { name: name.into(), kind, lower, upper };
        v.validate()?;
        Ok(v)
    }

    pub fn continuous(name: impl Into<String>, lower: f64, upper: f64) -> Result<Self, ProblemError> {
        Self::new(name, VariableKind::Continuous, lower, upper)
    }

    pub fn integer(name: impl Into<String>, lower: i64, upper: i64) -> Result<Self, ProblemError> {
        Self::new(name, VariableKind::Integer, lower as f64, upper as f64)
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let fail = |message: &str| {
            Err(ProblemError::Variable { name: self.name.clone(), message: message.into() })
        };
        if !self.lower.is_finite() || !self.upper.is_finite() {
            return fail("bounds must be finite");
        }
        if self.lower > self.upper {
            return fail("lower bound exceeds upper bound");
        }
        if self.kind == VariableKind::Integer
            && !(math::is_integral(self.lower) && math::is_integral(self.upper))
        {
            return fail("integer variables need integral bounds");
        }
        Ok(())
    }

    pub fn is_integer(&self) -> bool {
        self.kind == VariableKind::Integer
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lower
            && value <= self.upper
            && (!self.is_integer() || math::is_integral(value))
    }

    /// Nearest admissible value: clamped into the bounds and, for integer
    /// variables, rounded.
    pub fn clip(&self, value: f64) -> f64 {
        let v = if value.is_nan() { self.lower } else { value.clamp(self.lower, self.upper) };
        if self.is_integer() {
            math::round(v).clamp(self.lower, self.upper)
        } else {
            v
        }
    }

    /// Uniform draw over the bounds (over the integer range for integers).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            VariableKind::Continuous if self.lower == self.upper => self.lower,
            VariableKind::Continuous => rng.random_range(self.lower..=self.upper),
            VariableKind::Integer => rng.random_range(self.lower as i64..=self.upper as i64) as f64,
        }
    }
}

/// Values aligned with a problem's variable list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DesignVector(pub Vec<f64>);

impl DesignVector {
    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for DesignVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for DesignVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}
