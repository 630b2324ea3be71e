//! Positive monotone weights `f: {1..n} → (0, ∞)` and their integer powers.
//!
//! Values are kept in the log domain. A weight is stored as a base table
//! `log f` together with an integer exponent, so `f^k` never materializes a
//! value outside double-precision range and powers compose exactly.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest log value whose exponential is still finite in `f64`.
pub const MAX_LOG_EVAL: f64 = 709.782_712_893_384;

#[derive(Debug, Clone)]
pub struct Weight {
    log_base: Arc<[f64]>,
    exponent: u64,
    growth_note: Option<String>,
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n()
            && self
                .log_values()
                .iter()
                .zip(other.log_values())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// A violated weight invariant. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum WeightViolation {
    NonFinite { index: usize },
    NotMonotone { index: usize },
    Empty,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<WeightViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Weight {
    /// Builds a weight from linear-scale values. No invariant is checked; see
    /// [`Weight::validate`].
    pub fn from_values(values: &[f64]) -> Self {
        Self::from_log_values(values.iter().map(|v| v.ln()).collect())
    }

    pub fn from_log_values(log_values: Vec<f64>) -> Self {
        Self {
            log_base: log_values.into(),
            exponent: 1,
            growth_note: None,
        }
    }

    /// Like [`Weight::from_values`] but rejects weights that fail validation.
    pub fn validated(values: &[f64]) -> Result<Self> {
        let w = Self::from_values(values);
        let report = w.validate();
        match report.violations.first() {
            None => Ok(w),
            Some(v) => Err(Error::InvalidWeight(format!("{v:?}"))),
        }
    }

    /// The constant weight `1` on `n` indices.
    pub fn constant_one(n: usize) -> Self {
        Self::from_log_values(vec![0.0; n]).with_note("constant")
    }

    /// `f(ν) = ν^degree + 1`. Degree 2 is the circle weight `σ(ν) = ν² + 1`.
    pub fn poly_plus_one(n: usize, degree: u32) -> Self {
        let logs = (1..=n)
            .map(|nu| {
                let p = (nu as f64).powi(degree as i32);
                if p.is_finite() {
                    p.ln_1p()
                } else {
                    let a = degree as f64 * (nu as f64).ln();
                    a + (-a).exp().ln_1p()
                }
            })
            .collect();
        Self::from_log_values(logs).with_note(format!("nu^{degree}+1"))
    }

    /// The circle weight `σ(ν) = ν² + 1`.
    pub fn sigma(n: usize) -> Self {
        Self::poly_plus_one(n, 2)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.growth_note = Some(note.into());
        self
    }

    pub fn growth_note(&self) -> Option<&str> {
        self.growth_note.as_deref()
    }

    pub fn n(&self) -> usize {
        self.log_base.len()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `log f(ν)` for 1-based `ν`.
    pub fn log_eval(&self, nu: usize) -> Result<f64> {
        self.check_index(nu)?;
        Ok(self.log_at(nu - 1))
    }

    /// `f(ν)` for 1-based `ν`. Fails with [`Error::Overflow`] when the value
    /// is not representable.
    pub fn eval(&self, nu: usize) -> Result<f64> {
        let l = self.log_eval(nu)?;
        if l > MAX_LOG_EVAL {
            return Err(Error::Overflow(l));
        }
        Ok(l.exp())
    }

    pub fn log_values(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.log_at(i)).collect()
    }

    /// Linear values; entries beyond `f64` range become `inf`.
    pub fn values(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.log_at(i).exp()).collect()
    }

    /// `f^k`. Exponents multiply, so `(f^a)^b` and `f^{ab}` are bit-identical.
    pub fn power(&self, k: u64) -> Self {
        Self {
            log_base: Arc::clone(&self.log_base),
            exponent: self.exponent * k,
            growth_note: self.growth_note.clone(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.n() == 0 {
            violations.push(WeightViolation::Empty);
        }
        let logs = self.log_values();
        if let Some(i) = logs.iter().position(|l| !l.is_finite()) {
            violations.push(WeightViolation::NonFinite { index: i + 1 });
        }
        if let Some(i) = logs.windows(2).position(|w| w[1] < w[0]) {
            violations.push(WeightViolation::NotMonotone { index: i + 2 });
        }
        ValidationReport { violations }
    }

    fn log_at(&self, i: usize) -> f64 {
        if self.exponent == 0 {
            0.0
        } else {
            self.exponent as f64 * self.log_base[i]
        }
    }

    fn check_index(&self, nu: usize) -> Result<()> {
        if nu == 0 || nu > self.n() {
            return Err(Error::IndexOutOfRange {
                index: nu,
                n: self.n(),
            });
        }
        Ok(())
    }
}

/// JSON form of a weight.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    Table {
        n: usize,
        values: Vec<f64>,
    },
    ClosedForm {
        n: usize,
        formula: Formula,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Formula {
    PolyPlusOne { degree: u32 },
}

impl WeightSpec {
    pub fn into_weight(self) -> Result<Weight> {
        match self {
            WeightSpec::Table { n, values } => {
                if values.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: values.len(),
                    });
                }
                Ok(Weight::from_values(&values))
            }
            WeightSpec::ClosedForm {
                n,
                formula: Formula::PolyPlusOne { degree },
            } => Ok(Weight::poly_plus_one(n, degree)),
        }
    }
}
