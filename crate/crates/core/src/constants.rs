//! SI physical constants and ⁸⁷Rb data.
//!
//! Every quantity in the crate is SI. Frequencies are stored as angular
//! frequencies (rad/s); conversion from Hz happens only at the config boundary.
//!
//! | constant        | value                      | source                         |
//! |-----------------|----------------------------|--------------------------------|
//! | ħ               | 1.054571817e-34 J·s        | CODATA 2018 (exact via h)      |
//! | μ₀              | 1.25663706212e-6 H/m       | CODATA 2018                    |
//! | ε₀              | 8.8541878128e-12 F/m       | CODATA 2018                    |
//! | c               | 299792458 m/s              | exact                          |
//! | μ_B             | 9.2740100783e-24 J/T       | CODATA 2018                    |
//! | g               | 9.80665 m/s²               | standard gravity (exact)       |
//! | M(⁸⁷Rb)         | 86.909180520 u             | Steck, Rubidium 87 D line data |
//! | u               | 1.66053906660e-27 kg       | CODATA 2018                    |
//! | a_s(⁸⁷Rb)       | 5.4 nm                     | common literature value        |
//! | Ω (hyperfine)   | 2π × 6.8347 GHz            | ground-state hyperfine split   |

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s).
    pub hbar: f64,
    /// Vacuum permeability (H/m).
    pub mu0: f64,
    /// Vacuum permittivity (F/m).
    pub eps0: f64,
    /// Speed of light (m/s).
    pub c_light: f64,
    /// Bohr magneton (J/T).
    pub mu_bohr: f64,
    /// Gravitational acceleration (m/s²).
    pub g_grav: f64,
    /// ⁸⁷Rb atomic mass (kg).
    pub mass_rb87: f64,
    /// s-wave scattering length (m).
    pub a_scatt: f64,
    /// Ground-state hyperfine splitting (rad/s).
    pub hf_splitting: f64,
}

pub const RB87: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    mu0: 1.256_637_062_12e-6,
    eps0: 8.854_187_812_8e-12,
    c_light: 299_792_458.0,
    mu_bohr: 9.274_010_078_3e-24,
    g_grav: 9.806_65,
    mass_rb87: 86.909_180_520 * ATOMIC_MASS_UNIT,
    a_scatt: 5.4e-9,
    hf_splitting: 2.0 * PI * 6.8347e9,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        RB87
    }
}

impl PhysicalConstants {
    /// Zeeman splitting ω₀ = μ_B·B/(2ħ) of neighbouring m_F sublevels (g_F = 1/2).
    pub fn zeeman_splitting(&self, b_offset: f64) -> Result<f64> {
        if !(b_offset >= 0.0) || !b_offset.is_finite() {
            return Err(Error::Domain {
                function: "zeeman_splitting",
                value: b_offset,
                domain: "b_offset >= 0",
            });
        }
        Ok(self.mu_bohr * b_offset / (2.0 * self.hbar))
    }

    /// Free-space impedance √(μ₀/ε₀). Not to be confused with the outcoupling amplitude.
    pub fn vacuum_impedance(&self) -> f64 {
        (self.mu0 / self.eps0).sqrt()
    }
}

/// Converts an ordinary frequency in Hz to an angular frequency.
pub fn hz_to_angular(f_hz: f64) -> f64 {
    2.0 * PI * f_hz
}

pub fn angular_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}
