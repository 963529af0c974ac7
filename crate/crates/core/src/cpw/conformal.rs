//! Quasi-TEM line parameters from conformal mapping.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::CpwGeometry;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::special::{complementary_modulus, ellipk};

/// Elliptic moduli of the mapping and the ratios κᵢ = K(kᵢ)/K(k′ᵢ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalModuli {
    pub k0: f64,
    pub k1: f64,
    pub k0p: f64,
    pub k1p: f64,
    pub kappa0: f64,
    pub kappa1: f64,
}

/// k₀ = S/(S+2W), k₁ = sinh(πS/4h)/sinh(π(S+2W)/4h), k′ = √(1−k²).
pub fn conformal_moduli(geom: &CpwGeometry) -> Result<ConformalModuli> {
    geom.validate()?;
    let s = geom.strip_width;
    let outer = s + 2.0 * geom.gap;
    let k0 = s / outer;
    let h4 = 4.0 * geom.substrate_thickness;
    // sinh ratio written with exp_m1 so that h ≫ S does not lose digits
    let k1 = sinh_ratio(PI * s / h4, PI * outer / h4);
    for (name, k) in [("k0", k0), ("k1", k1)] {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::InvalidParameter {
                name,
                value: k,
                reason: "elliptic modulus must lie in (0, 1); gap too small",
            });
        }
    }
    let k0p = complementary_modulus(k0);
    let k1p = complementary_modulus(k1);
    Ok(ConformalModuli {
        k0,
        k1,
        k0p,
        k1p,
        kappa0: modulus_ratio(k0)?,
        kappa1: modulus_ratio(k1)?,
    })
}

/// K(k)/K(k′). For k below 1e-4 the complementary modulus rounds to 1, so
/// K(k′) ≈ ln(4/k) + (k²/4)(ln(4/k) − 1) is used instead.
fn modulus_ratio(k: f64) -> Result<f64> {
    if k < 1e-4 {
        let l = (4.0 / k).ln();
        let kk = k * k / 4.0;
        return Ok(0.5 * PI * (1.0 + kk) / (l + kk * (l - 1.0)));
    }
    Ok(ellipk(k)? / ellipk(complementary_modulus(k))?)
}

fn sinh_ratio(a: f64, b: f64) -> f64 {
    if b > 350.0 {
        // both sinh overflow-prone; ratio → e^{a−b}
        return (a - b).exp();
    }
    let sa = 0.5 * (a.exp_m1() - (-a).exp_m1());
    let sb = 0.5 * (b.exp_m1() - (-b).exp_m1());
    sa / sb
}

/// ε_eff = 1 + (ε_r − 1)/2 · κ₁/κ₀.
pub fn effective_permittivity(geom: &CpwGeometry) -> Result<f64> {
    let m = conformal_moduli(geom)?;
    Ok(1.0 + 0.5 * (geom.eps_r - 1.0) * m.kappa1 / m.kappa0)
}

/// c_CPW = 4 ε₀ ε_eff κ₀ (F/m).
pub fn capacitance_per_length(geom: &CpwGeometry, consts: &PhysicalConstants) -> Result<f64> {
    let m = conformal_moduli(geom)?;
    let eps_eff = 1.0 + 0.5 * (geom.eps_r - 1.0) * m.kappa1 / m.kappa0;
    Ok(4.0 * consts.eps0 * eps_eff * m.kappa0)
}
