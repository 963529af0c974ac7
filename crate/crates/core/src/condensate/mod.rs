//! Thomas-Fermi condensate: derived trap and cloud quantities, and the
//! spectral resolution function of the cloud used as an outcoupling detector.

mod spectral;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

pub use spectral::{spectral_amplitude_f, spectral_resolution_d, SpectralKernel, SpectralPoint};

/// Relative disagreement between the two chemical-potential routes above
/// which [`derive`] refuses the inputs.
pub const MU_CONSISTENCY_LIMIT: f64 = 0.05;

/// Input description of a (nominally spherical) condensate.
///
/// At least one of `tf_radius` and `trap_freqs` must be given; when both are
/// present they are checked against each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondensateParams {
    pub atom_number: f64,
    /// Thomas-Fermi radius a (m).
    pub tf_radius: Option<f64>,
    /// (ω_x, ω_y, ω_z) in rad/s.
    pub trap_freqs: Option<[f64; 3]>,
    /// Homogeneous offset field (T).
    pub b_offset: f64,
}

impl CondensateParams {
    /// ⁸⁷Rb cloud of radius 5 μm with 2×10⁴ atoms in a 2π×84 Hz trap and a
    /// 0.1 mT offset field.
    pub fn reference_setup() -> Self {
        let w = 2.0 * PI * 84.0;
        CondensateParams {
            atom_number: 2e4,
            tf_radius: Some(5e-6),
            trap_freqs: Some([w, w, w]),
            b_offset: 1e-4,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.atom_number >= 1.0) || !self.atom_number.is_finite() {
            return Err(Error::InvalidParameter {
                name: "atom_number",
                value: self.atom_number,
                reason: "at least one atom required",
            });
        }
        if let Some(a) = self.tf_radius {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "tf_radius",
                    value: a,
                    reason: "must be positive",
                });
            }
        }
        if let Some(w) = self.trap_freqs {
            for v in w {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "trap_freqs",
                        value: v,
                        reason: "trap frequencies must be positive",
                    });
                }
            }
        }
        if self.tf_radius.is_none() && self.trap_freqs.is_none() {
            return Err(Error::InvalidParameter {
                name: "tf_radius",
                value: f64::NAN,
                reason: "either the radius or the trap frequencies must be given",
            });
        }
        if !(self.b_offset >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "b_offset",
                value: self.b_offset,
                reason: "must be non-negative",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondensateDerived {
    pub atom_number: f64,
    /// Thomas-Fermi radius a (m).
    pub tf_radius: f64,
    pub trap_freqs: [f64; 3],
    pub spherical: bool,
    /// g_s = 4πħ²a_s/M (J·m³).
    pub g_s: f64,
    /// μ = 5N₀g_s/(2V_BEC) (J).
    pub mu: f64,
    /// μ = Mω_y²a²/2 (J), the trap-radius route.
    pub mu_trap: f64,
    pub v_bec: f64,
    /// l₀ = (ħ²/2M²g)^{1/3} (m).
    pub l0: f64,
    /// Gravitational sag −g/ω_y² (m).
    pub y0_sag: f64,
    /// Zeeman splitting of neighbouring sublevels (rad/s).
    pub omega0: f64,
    /// Larmor frequency including the gravitational term (rad/s).
    pub omega_l: f64,
    /// η/B_x = √3 μ_B √N₀ / (4√2 ħ) (rad/s/T).
    pub eta_per_tesla: f64,
    /// Mgl₀, the natural energy unit of the free fall (J).
    pub energy_unit: f64,
    pub warnings: Vec<String>,
    pub constants: PhysicalConstants,
}

impl CondensateDerived {
    /// ā = a/l₀.
    pub fn a_bar(&self) -> f64 {
        self.tf_radius / self.l0
    }

    /// μ/(N₀g_s), the peak density of the normalised cloud (m⁻³).
    pub fn peak_density(&self) -> f64 {
        self.mu / (self.atom_number * self.g_s)
    }

    /// Outcoupling amplitude η for a driving field B_x (rad/s).
    pub fn eta(&self, b_x: f64) -> f64 {
        self.eta_per_tesla * b_x
    }

    /// Full energy width 2Mga of the cloud expressed as a frequency (rad/s).
    pub fn bandwidth(&self) -> f64 {
        2.0 * self.constants.mass_rb87 * self.constants.g_grav * self.tf_radius
            / self.constants.hbar
    }
}

/// Fills in every derived quantity and checks that the radius, atom number
/// and trap frequency agree on μ to within [`MU_CONSISTENCY_LIMIT`].
pub fn derive(params: &CondensateParams, consts: &PhysicalConstants) -> Result<CondensateDerived> {
    params.validate()?;
    let m = consts.mass_rb87;
    let hbar = consts.hbar;
    let n0 = params.atom_number;
    let g_s = 4.0 * PI * hbar * hbar * consts.a_scatt / m;

    let (a, freqs) = match (params.tf_radius, params.trap_freqs) {
        (Some(a), Some(w)) => (a, w),
        (Some(a), None) => {
            // μ = 15N₀g_s/(8πa³) = Mω²a²/2
            let mu = 15.0 * n0 * g_s / (8.0 * PI * a.powi(3));
            let w = (2.0 * mu / (m * a * a)).sqrt();
            (a, [w; 3])
        }
        (None, Some(w)) => {
            let a = (15.0 * n0 * g_s / (4.0 * PI * m * w[1] * w[1])).powf(0.2);
            (a, w)
        }
        (None, None) => unreachable!("validated above"),
    };
    let wy = freqs[1];
    let spherical = freqs
        .iter()
        .all(|w| ((w - wy) / wy).abs() < 1e-9);

    let v_bec = 4.0 / 3.0 * PI * a.powi(3);
    let mu = 2.5 * n0 * g_s / v_bec;
    let mu_trap = 0.5 * m * wy * wy * a * a;
    let rel_diff = ((mu_trap - mu) / mu).abs();
    if rel_diff > MU_CONSISTENCY_LIMIT {
        return Err(Error::InconsistentCondensate {
            mu_trap,
            mu_number: mu,
            rel_diff,
        });
    }

    let g = consts.g_grav;
    let l0 = (hbar * hbar / (2.0 * m * m * g)).cbrt();
    let omega0 = consts.zeeman_splitting(params.b_offset)?;
    let omega_l = consts.hf_splitting + omega0 + m * g * g / (2.0 * hbar * wy * wy);
    let eta_per_tesla =
        3f64.sqrt() * consts.mu_bohr * n0.sqrt() / (4.0 * 2f64.sqrt() * hbar);

    let mut warnings = Vec::new();
    if a <= l0 {
        warnings.push(format!(
            "cloud radius {a:.3e} m does not exceed the Airy length {l0:.3e} m"
        ));
    }
    if !spherical {
        warnings.push("anisotropic trap: spectral functions assume a spherical cloud".into());
    }
    if rel_diff > 0.01 {
        warnings.push(format!(
            "chemical potential routes differ by {:.1}%",
            100.0 * rel_diff
        ));
    }

    Ok(CondensateDerived {
        atom_number: n0,
        tf_radius: a,
        trap_freqs: freqs,
        spherical,
        g_s,
        mu,
        mu_trap,
        v_bec,
        l0,
        y0_sag: -g / (wy * wy),
        omega0,
        omega_l,
        eta_per_tesla,
        energy_unit: m * g * l0,
        warnings,
        constants: *consts,
    })
}

/// Thomas-Fermi amplitude √(μ/N₀g_s)·√(1 − (r⊥² + y²)/a²), zero outside the
/// cloud. Normalised so that ∫Φ² d³r = 1.
pub fn tf_profile(derived: &CondensateDerived, r_perp: f64, y: f64) -> f64 {
    let rho = r_perp.hypot(y) / derived.tf_radius;
    let u = (1.0 - rho) * (1.0 + rho);
    if u <= 0.0 {
        0.0
    } else {
        (derived.peak_density() * u).sqrt()
    }
}
