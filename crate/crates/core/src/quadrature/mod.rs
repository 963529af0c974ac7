//! Adaptive quadrature: 21-point Gauss–Kronrod panels with global bisection,
//! successive-panel summation for [0, ∞), and a nested cylindrical-volume
//! driver.
//!
//! All drivers are generic over [`QuadValue`] so the same machinery handles
//! real integrands, complex amplitudes and integrands that carry an
//! auxiliary error-bound channel.

mod gauss_kronrod;
mod semi_infinite;
mod volume;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub use gauss_kronrod::{integrate_1d, integrate_1d_par};
pub use semi_infinite::integrate_semi_infinite;
pub use volume::integrate_cylindrical_volume;

/// Values an integrand may return.
pub trait QuadValue:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    /// Size used for tolerances and error estimates.
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// An integrand value paired with a bound on its own error, for integrands
/// that are themselves computed numerically. The bound is integrated along
/// with the value; only `value` drives the adaptive error control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WithError<T> {
    pub value: T,
    pub error: f64,
}

impl<T> WithError<T> {
    pub fn new(value: T, error: f64) -> Self {
        WithError { value, error }
    }
}

impl<T: QuadValue> Add for WithError<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        WithError::new(self.value + o.value, self.error + o.error)
    }
}

impl<T: QuadValue> Sub for WithError<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        WithError::new(self.value - o.value, self.error - o.error)
    }
}

impl<T: QuadValue> Mul<f64> for WithError<T> {
    type Output = Self;
    fn mul(self, w: f64) -> Self {
        WithError::new(self.value * w, self.error * w.abs())
    }
}

impl<T: QuadValue> QuadValue for WithError<T> {
    fn zero() -> Self {
        WithError::new(T::zero(), 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.value.magnitude()
    }
}

/// How [`integrate_semi_infinite`] handles the infinite upper limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TailStrategy {
    /// Integrate over [0, upper] only.
    FixedUpperLimit { upper: f64 },
    /// Sum panels [nΛ, (n+1)Λ] until two consecutive panels are negligible.
    SuccessiveIntervals { panel_width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail: TailStrategy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-6,
            abs_tol: 1e-14,
            max_subdivisions: 200,
            tail: TailStrategy::SuccessiveIntervals {
                panel_width: std::f64::consts::PI,
            },
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
            ..Default::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tail(mut self, tail: TailStrategy) -> Self {
        self.tail = tail;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                reason: "must be positive",
            });
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
                reason: "must be positive",
            });
        }
        if self.max_subdivisions < 8 {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                value: self.max_subdivisions as f64,
                reason: "must be at least 8",
            });
        }
        match self.tail {
            TailStrategy::FixedUpperLimit { upper } if !(upper > 0.0) => {
                Err(Error::InvalidParameter {
                    name: "upper",
                    value: upper,
                    reason: "fixed upper limit must be positive",
                })
            }
            TailStrategy::SuccessiveIntervals { panel_width } if !(panel_width > 0.0) => {
                Err(Error::InvalidParameter {
                    name: "panel_width",
                    value: panel_width,
                    reason: "must be positive",
                })
            }
            _ => Ok(()),
        }
    }

    /// Same spec with both tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }

    /// Target accuracy for a result of size `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult<T = f64> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: QuadValue> IntegralResult<T> {
    pub fn map<U: QuadValue>(self, f: impl FnOnce(T) -> U) -> IntegralResult<U> {
        IntegralResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}
