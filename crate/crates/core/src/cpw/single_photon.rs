//! Single-photon magnetic field amplitudes.

use std::f64::consts::PI;

use super::{capacitance_per_length, conformal_moduli, CpwGeometry, CpwMode};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::special::sinc_half;

/// V₀ = √(ħω/C) with the total capacitance C = c_CPW·L.
pub fn single_photon_voltage(
    geom: &CpwGeometry,
    mode: &CpwMode,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let c_total = capacitance_per_length(geom, consts)? * mode.length;
    Ok((consts.hbar * mode.omega / c_total).sqrt())
}

/// |B_max| = √(2μ₀ħω/V_c) with V_c = Lb²/π: one photon's energy held
/// entirely in the magnetic field.
pub fn b_max_single_photon(
    geom: &CpwGeometry,
    mode: &CpwMode,
    consts: &PhysicalConstants,
) -> Result<f64> {
    geom.validate()?;
    let b = geom.half_width();
    let v_c = mode.length * b * b / PI;
    Ok((2.0 * consts.mu0 * consts.hbar * mode.omega / v_c).sqrt())
}

/// |B_max^CQED| = √(2/κ₀)·s₁·√(2μ₀ħω/(Lb²)), the n = 1 harmonic at the
/// slot for the circuit-QED voltage V₀.
pub fn b_max_cqed(geom: &CpwGeometry, mode: &CpwMode, consts: &PhysicalConstants) -> Result<f64> {
    let m = conformal_moduli(geom)?;
    let b = geom.half_width();
    let s1 = sinc_half(1, geom.delta()) * (PI * geom.delta_bar() / 2.0).sin();
    Ok((2.0 / m.kappa0).sqrt()
        * s1.abs()
        * (2.0 * consts.mu0 * consts.hbar * mode.omega / (mode.length * b * b)).sqrt())
}

/// B_x = e^{−πd/b}·|B_max| at distance `d` from the chip surface.
pub fn b_at_condensate(
    geom: &CpwGeometry,
    mode: &CpwMode,
    d: f64,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "distance must be non-negative",
        });
    }
    let attenuation = (-PI * d / geom.half_width()).exp();
    Ok(attenuation * b_max_single_photon(geom, mode, consts)?)
}
