//! Coplanar-waveguide resonator: cross-section geometry, the half-wave mode,
//! the quasi-static magnetic field and single-photon field amplitudes.
//!
//! Field coordinates use the primed CPW frame: x′ across the strip (0 at the
//! centre line, b at the outer ground edge), y′ normal to the chip (y′ ≤ 0 in
//! air, 0 ≤ y′ ≤ h in the substrate), z′ along the resonator (0 and L at the
//! open ends).

mod conformal;
mod field;
mod single_photon;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

pub use conformal::{capacitance_per_length, conformal_moduli, effective_permittivity, ConformalModuli};
pub use field::{
    field_air_side, field_air_side_truncated, field_substrate_side, mode_volume, CpwPoint,
    FieldVector, ModeVolume,
    SERIES_MAX_TERMS,
};
pub use single_photon::{b_at_condensate, b_max_cqed, b_max_single_photon, single_photon_voltage};

/// Transverse cross-section of the waveguide. Lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwGeometry {
    /// Centre strip width S.
    pub strip_width: f64,
    /// Gap W between strip and ground.
    pub gap: f64,
    /// Ground electrode width w.
    pub ground_width: f64,
    /// Substrate thickness h.
    pub substrate_thickness: f64,
    /// Substrate relative permittivity.
    pub eps_r: f64,
}

impl CpwGeometry {
    pub fn new(
        strip_width: f64,
        gap: f64,
        ground_width: f64,
        substrate_thickness: f64,
        eps_r: f64,
    ) -> Result<Self> {
        let g = CpwGeometry {
            strip_width,
            gap,
            ground_width,
            substrate_thickness,
            eps_r,
        };
        g.validate()?;
        Ok(g)
    }

    /// Al on sapphire: S = 15 μm, W = 10 μm, w = S/2, h = 500 μm, ε_r = 11.5.
    pub fn reference_setup() -> Self {
        CpwGeometry {
            strip_width: 15e-6,
            gap: 10e-6,
            ground_width: 7.5e-6,
            substrate_thickness: 500e-6,
            eps_r: 11.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("strip_width", self.strip_width),
            ("gap", self.gap),
            ("ground_width", self.ground_width),
            ("substrate_thickness", self.substrate_thickness),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be positive and finite",
                });
            }
        }
        if !(self.eps_r >= 1.0) || !self.eps_r.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eps_r",
                value: self.eps_r,
                reason: "relative permittivity must be >= 1",
            });
        }
        Ok(())
    }

    /// b = S/2 + W + w.
    pub fn half_width(&self) -> f64 {
        self.strip_width / 2.0 + self.gap + self.ground_width
    }

    /// δ = W/b.
    pub fn delta(&self) -> f64 {
        self.gap / self.half_width()
    }

    /// δ̄ = (S + W)/b.
    pub fn delta_bar(&self) -> f64 {
        (self.strip_width + self.gap) / self.half_width()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        CpwGeometry {
            strip_width: self.strip_width * factor,
            gap: self.gap * factor,
            ground_width: self.ground_width * factor,
            substrate_thickness: self.substrate_thickness * factor,
            eps_r: self.eps_r,
        }
    }
}

/// Half-wave resonant mode of the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwMode {
    /// ω_CPW (rad/s).
    pub omega: f64,
    /// Free-space wavelength λ.
    pub lambda_free: f64,
    pub eps_eff: f64,
    /// Guided wavelength λ_g = λ/√ε_eff.
    pub lambda_g: f64,
    /// Resonator length L = λ_g/2.
    pub length: f64,
    /// Transverse mode index n ≥ 1.
    pub n_transverse: u32,
    pub quality_q: f64,
    /// Single-photon slot voltage √(ħω/C) with C = c_CPW·L.
    pub v0_volts: f64,
    /// v = √((λ/λ_g)² − 1).
    pub v: f64,
    /// q = 1 − (λ/λ_g)².
    pub q: f64,
}

impl CpwMode {
    pub fn with_transverse(mut self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n_transverse",
                value: 0.0,
                reason: "transverse mode index starts at 1",
            });
        }
        self.n_transverse = n;
        Ok(self)
    }

    /// Cavity linewidth ω/Q (rad/s).
    pub fn linewidth(&self) -> f64 {
        self.omega / self.quality_q
    }
}

/// Builds the fundamental half-wave mode at angular frequency `omega`.
pub fn make_mode(
    geom: &CpwGeometry,
    omega: f64,
    quality_q: f64,
    consts: &PhysicalConstants,
) -> Result<CpwMode> {
    geom.validate()?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter {
            name: "frequency",
            value: omega,
            reason: "must be positive",
        });
    }
    if !(quality_q > 0.0) {
        return Err(Error::InvalidParameter {
            name: "quality_q",
            value: quality_q,
            reason: "must be positive",
        });
    }
    let eps_eff = effective_permittivity(geom)?;
    let lambda_free = 2.0 * std::f64::consts::PI * consts.c_light / omega;
    let lambda_g = lambda_free / eps_eff.sqrt();
    let length = lambda_g / 2.0;
    let ratio2 = (lambda_free / lambda_g).powi(2);
    let c_line = capacitance_per_length(geom, consts)?;
    let v0_volts = (consts.hbar * omega / (c_line * length)).sqrt();
    Ok(CpwMode {
        omega,
        lambda_free,
        eps_eff,
        lambda_g,
        length,
        n_transverse: 1,
        quality_q,
        v0_volts,
        v: (ratio2 - 1.0).max(0.0).sqrt(),
        q: 1.0 - ratio2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::RB87;
    use std::f64::consts::PI;

    #[test]
    fn geometry_validation() {
        assert!(CpwGeometry::new(15e-6, -1e-6, 7.5e-6, 500e-6, 11.5).is_err());
        assert!(CpwGeometry::new(15e-6, 0.0, 7.5e-6, 500e-6, 11.5).is_err());
        assert!(CpwGeometry::new(15e-6, 10e-6, 7.5e-6, 500e-6, 0.5).is_err());
        let g = CpwGeometry::reference_setup();
        assert!(g.validate().is_ok());
        assert_eq!(g.half_width(), 15e-6 / 2.0 + 10e-6 + 7.5e-6);
        assert!((g.delta() - 0.4).abs() < 1e-15);
        assert!((g.delta_bar() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reference_resonator_length() {
        let g = CpwGeometry::reference_setup();
        let m = make_mode(&g, 2.0 * PI * 6.8354e9, 1.72e6, &RB87).unwrap();
        let want = RB87.c_light / (2.0 * 6.8354e9 * m.eps_eff.sqrt());
        assert!((m.length - want).abs() < 1e-15, "L = {}", m.length);
        assert!((m.length - 8.7725e-3).abs() < 1e-7, "L = {}", m.length);
        assert_eq!(m.length * 2.0 / m.lambda_g, 1.0);
        assert!(m.v > 0.0);
        assert!((m.q + m.v * m.v).abs() < 1e-12);
    }

    #[test]
    fn eps_eff_four_halves_wavelength() {
        let base = CpwGeometry::reference_setup();
        let m = conformal_moduli(&base).unwrap();
        let g = CpwGeometry {
            eps_r: 1.0 + 6.0 * m.kappa0 / m.kappa1,
            ..base
        };
        let mode = make_mode(&g, 1e10, 1e6, &RB87).unwrap();
        assert!((mode.eps_eff - 4.0).abs() < 1e-13);
        assert!((mode.lambda_g / mode.lambda_free - 0.5).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_frequency() {
        let g = CpwGeometry::reference_setup();
        assert!(make_mode(&g, 0.0, 1e6, &RB87).is_err());
        assert!(make_mode(&g, 1e9, 0.0, &RB87).is_err());
    }

    #[test]
    fn transverse_index_starts_at_one() {
        let g = CpwGeometry::reference_setup();
        let m = make_mode(&g, 4e10, 1e6, &RB87).unwrap();
        assert!(m.with_transverse(0).is_err());
        assert_eq!(m.with_transverse(3).unwrap().n_transverse, 3);
    }
}
