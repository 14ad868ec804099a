//! Outcomes of identity checks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{is_zero_vector, vector_to_strings};
use crate::rational::Rational;

/// A concrete counterexample: which basis elements were plugged in and the
/// nonzero residual they produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<Rational>>,
}

impl Witness {
    pub fn new(inputs: impl Into<String>) -> Self {
        Witness { inputs: inputs.into(), residual: None }
    }

    pub fn with_residual(inputs: impl Into<String>, residual: Vec<Rational>) -> Self {
        Witness { inputs: inputs.into(), residual: Some(residual) }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inputs)?;
        if let Some(r) = &self.residual {
            write!(f, " -> [{}]", vector_to_strings(r).join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Witness),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }

    /// Pass iff `residual` is zero; otherwise fail with `inputs` as the witness label.
    pub fn zero(residual: Vec<Rational>, inputs: impl FnOnce() -> String) -> Self {
        if is_zero_vector(&residual) {
            Verdict::Pass
        } else {
            Verdict::Fail(Witness::with_residual(inputs(), residual))
        }
    }

    /// Keeps the first failure.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Pass => other(),
            fail => fail,
        }
    }
}

/// Runs checks in order and stops at the first failure.
pub fn first_failure<I>(checks: I) -> Verdict
where
    I: IntoIterator<Item = Verdict>,
{
    checks.into_iter().find(|v| !v.is_pass()).unwrap_or(Verdict::Pass)
}
