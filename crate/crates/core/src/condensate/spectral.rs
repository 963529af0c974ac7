//! Spectral resolution function of a spherical Thomas-Fermi cloud.
//!
//! Lengths along gravity are scaled by l₀ (ȳ = y/l₀), transverse lengths by
//! the cloud radius a (r̄⊥ = r⊥/a, k̄ = a·k⊥), energies by Mgl₀. With
//! ε = ħ(ω−Δ)/(Mgl₀) and ā = a/l₀ the amplitude is
//!
//! F = −(π/Mgl₀)·√(μ/N₀g_s)·∫₀^∞ dk̄ k̄ J₀(k̄r̄⊥) Ci(ȳ − ε + k̄²/ā²) G(k̄)
//!
//! where G(k̄) = ∫₀¹ dr′ r′ J₀(k̄r′) ∫ dȳ′ √(1 − r′² − ȳ′²/ā²) Ai(ȳ′ − ε + k̄²/ā²)
//! is the projection of the cloud onto the free-fall states. G does not depend
//! on the observation point, so [`SpectralKernel`] memoises it per k̄.

use dashmap::DashMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use super::CondensateDerived;
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_1d, integrate_semi_infinite, IntegralResult, QuadratureSpec, WithError,
};
use crate::special::{ai_unchecked, airy_all_unchecked, j0_unchecked, AIRY_MIN_ARG};

/// D and its dimensionless form at one detuning and position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    /// ω − Δ (rad/s).
    pub detuning: f64,
    pub r_perp: f64,
    pub y: f64,
    /// D (m⁻³).
    pub d_value: f64,
    /// D̄ = D/(μ/N₀g_s).
    pub d_bar: f64,
    /// Error bound on `d_value` (m⁻³).
    pub error: f64,
    pub converged: bool,
}

/// Evaluator of F and D at one detuning, sharing the cloud transform G(k̄)
/// across observation points. Safe to use from several threads.
pub struct SpectralKernel {
    derived: CondensateDerived,
    detuning: f64,
    eps: f64,
    a_bar: f64,
    spec: QuadratureSpec,
    g_spec: QuadratureSpec,
    cache: DashMap<u64, WithError<f64>>,
}

impl SpectralKernel {
    pub fn new(derived: &CondensateDerived, detuning: f64, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        if !derived.spherical {
            return Err(Error::InvalidParameter {
                name: "trap_freqs",
                value: derived.trap_freqs[0],
                reason: "spectral resolution requires a spherical cloud",
            });
        }
        if !detuning.is_finite() {
            return Err(Error::InvalidParameter {
                name: "detuning",
                value: detuning,
                reason: "must be finite",
            });
        }
        let a_bar = derived.a_bar();
        let eps = derived.constants.hbar * detuning / derived.energy_unit;
        // G is O(ā) at k̄ = 0; its absolute floor is tied to that scale
        let g_spec = QuadratureSpec {
            rel_tol: 0.1 * spec.rel_tol,
            abs_tol: 1e-3 * spec.rel_tol * a_bar,
            ..*spec
        };
        Ok(SpectralKernel {
            derived: derived.clone(),
            detuning,
            eps,
            a_bar,
            spec: *spec,
            g_spec,
            cache: DashMap::new(),
        })
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// ħ(ω−Δ)/(Mgl₀).
    pub fn scaled_detuning(&self) -> f64 {
        self.eps
    }

    pub fn derived(&self) -> &CondensateDerived {
        &self.derived
    }

    /// Number of distinct k̄ at which G has been evaluated.
    pub fn cached_transforms(&self) -> usize {
        self.cache.len()
    }

    /// G(k̄) with its quadrature error bound.
    pub fn cloud_transform(&self, k: f64) -> WithError<f64> {
        if let Some(v) = self.cache.get(&k.to_bits()) {
            return *v;
        }
        let v = self.compute_transform(k);
        self.cache.insert(k.to_bits(), v);
        v
    }

    fn compute_transform(&self, k: f64) -> WithError<f64> {
        let a_bar = self.a_bar;
        let shift = k * k / (a_bar * a_bar) - self.eps;
        // every Ai argument exceeds shift − ā; beyond ~ 100 the result underflows
        if shift - a_bar > 100.0 {
            return WithError::new(0.0, 0.0);
        }
        // The radial integral at fixed height u = ȳ′/ā has the closed form
        // ∫₀^R r J₀(k̄r) √(R² − r²) dr = R³ j₁(k̄R)/(k̄R) with R = √(1 − u²).
        // With u = sin θ the remaining integrand is smooth at the poles.
        let r = integrate_1d(
            |theta: f64| {
                let (u, c) = theta.sin_cos();
                let c2 = c * c;
                a_bar * c2 * c2 * j1_over_z(k * c) * ai_unchecked(a_bar * u + shift)
            },
            -FRAC_PI_2,
            FRAC_PI_2,
            &self.g_spec,
        );
        WithError::new(r.value, r.error_estimate)
    }

    /// The dimensionless integral I with F = −(π/Mgl₀)·√(μ/N₀g_s)·I.
    ///
    /// The error estimate includes the propagated error of G.
    pub fn scaled_amplitude(&self, r_perp: f64, y: f64) -> Result<IntegralResult<Complex64>> {
        if !r_perp.is_finite() || !y.is_finite() {
            return Err(Error::Domain {
                function: "spectral amplitude",
                value: if r_perp.is_finite() { y } else { r_perp },
                domain: "finite position",
            });
        }
        let r_bar = r_perp.abs() / self.derived.tf_radius;
        let y_bar = y / self.derived.l0;
        let base = y_bar - self.eps;
        if base < AIRY_MIN_ARG {
            return Err(Error::Domain {
                function: "spectral amplitude",
                value: y,
                domain: "(y/l0 - detuning) >= -1e4",
            });
        }
        let a2 = self.a_bar * self.a_bar;
        let overflow = Cell::new(None);
        let res = integrate_semi_infinite(
            |k: f64| {
                let g = self.cloud_transform(k);
                if g.value == 0.0 && g.error == 0.0 {
                    return WithError::new(Complex64::new(0.0, 0.0), 0.0);
                }
                let x = base + k * k / a2;
                let airy = airy_all_unchecked(x);
                if !airy.bi.is_finite() {
                    overflow.set(Some(x));
                    return WithError::new(Complex64::new(0.0, 0.0), 0.0);
                }
                let w = k * j0_unchecked(k * r_bar);
                let ci = Complex64::new(airy.bi, airy.ai) * w;
                WithError::new(ci * g.value, ci.norm() * g.error)
            },
            &self.spec,
        )?;
        if let Some(x) = overflow.get() {
            return Err(Error::Range {
                function: "airy_ci",
                value: x,
            });
        }
        Ok(IntegralResult {
            value: res.value.value,
            error_estimate: res.error_estimate + res.value.error,
            evaluations: res.evaluations,
            converged: res.converged,
        })
    }

    /// F (in units of 1/(J·m^{3/2})).
    pub fn amplitude(&self, r_perp: f64, y: f64) -> Result<IntegralResult<Complex64>> {
        let scale = -PI / self.derived.energy_unit * self.derived.peak_density().sqrt();
        Ok(self.scaled_amplitude(r_perp, y)?.map(|v| v * scale).with_error_scaled(scale.abs()))
    }

    /// D = (Mgl₀)²|F|² = π²(μ/N₀g_s)|I|² and D̄ = π²|I|².
    pub fn resolution(&self, r_perp: f64, y: f64) -> Result<SpectralPoint> {
        let i = self.scaled_amplitude(r_perp, y)?;
        let mag = i.value.norm();
        let e = i.error_estimate;
        let d_bar = PI * PI * mag * mag;
        let d_bar_err = PI * PI * (2.0 * mag * e + e * e);
        let rho = self.derived.peak_density();
        Ok(SpectralPoint {
            detuning: self.detuning,
            r_perp,
            y,
            d_value: rho * d_bar,
            d_bar,
            error: rho * d_bar_err,
            converged: i.converged,
        })
    }
}

/// j₁(z)/z = (sin z − z cos z)/z³, with its Maclaurin series near 0 where
/// the closed form cancels.
fn j1_over_z(z: f64) -> f64 {
    let z = z.abs();
    if z < 0.5 {
        // Σ_{m≥1} (−1)^{m+1} 2m z^{2m−2}/(2m+1)!
        let z2 = z * z;
        let mut term = 1.0 / 3.0;
        let mut sum = term;
        for m in 1..12 {
            let mf = m as f64;
            term *= -z2 * (mf + 1.0) / (mf * (2.0 * mf + 2.0) * (2.0 * mf + 3.0));
            sum += term;
        }
        sum
    } else {
        let (s, c) = z.sin_cos();
        (s - z * c) / (z * z * z)
    }
}

trait ScaleError {
    fn with_error_scaled(self, factor: f64) -> Self;
}

impl<T> ScaleError for IntegralResult<T> {
    fn with_error_scaled(mut self, factor: f64) -> Self {
        self.error_estimate *= factor;
        self
    }
}

/// F(ω−Δ, r) at a single point. Builds a fresh kernel; prefer
/// [`SpectralKernel`] for many points at one detuning.
pub fn spectral_amplitude_f(
    derived: &CondensateDerived,
    detuning: f64,
    r_perp: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<Complex64>> {
    SpectralKernel::new(derived, detuning, spec)?.amplitude(r_perp, y)
}

/// D(ω−Δ, r) at a single point.
pub fn spectral_resolution_d(
    derived: &CondensateDerived,
    detuning: f64,
    r_perp: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<SpectralPoint> {
    SpectralKernel::new(derived, detuning, spec)?.resolution(r_perp, y)
}
