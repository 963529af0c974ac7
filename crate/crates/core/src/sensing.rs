//! From a single cavity photon to a count of outcoupled atoms.
//!
//! The x-component of the cavity field at the cloud drives the outcoupling
//! transition with collective amplitude η. The density of outcoupled atoms
//! is |ħη/(Mgl₀)|²·D(ω−Δ, r), and its integral over a detection cylinder
//! below the cloud is the signal 𝒩 attributed to one photon.

use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::condensate::{CondensateDerived, SpectralKernel};
use crate::constants::PhysicalConstants;
use crate::cpw::{b_at_condensate, b_max_cqed, b_max_single_photon, CpwGeometry, CpwMode};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, integrate_cylindrical_volume, QuadratureSpec, WithError};

/// Minimum gap d₀ between the cloud edge and the chip surface (m).
pub const MIN_SURFACE_GAP: f64 = 1e-6;

/// Bandwidth-to-linewidth ratio below which the drive cannot be treated as
/// monochromatic.
pub const MONOCHROMATIC_MIN_RATIO: f64 = 2.0;

/// η = √3·μ_B·B_x·√N₀ / (4√2·ħ) (rad/s).
pub fn outcoupling_eta(b_x: f64, atom_number: f64, consts: &PhysicalConstants) -> Result<f64> {
    if !(b_x >= 0.0) || !b_x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "b_x",
            value: b_x,
            reason: "field amplitude must be non-negative",
        });
    }
    if !(atom_number >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "atom_number",
            value: atom_number,
            reason: "must be non-negative",
        });
    }
    Ok(3f64.sqrt() * consts.mu_bohr * b_x * atom_number.sqrt() / (4.0 * 2f64.sqrt() * consts.hbar))
}

/// A non-negative quantity with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

fn density_prefactor(derived: &CondensateDerived, eta: f64) -> f64 {
    (derived.constants.hbar * eta / derived.energy_unit).powi(2)
}

/// Outcoupled atom density |ħη/(Mgl₀)|²·D(−Δ, r) for a monochromatic drive at
/// detuning Δ (m⁻³ per unit time).
pub fn atom_density(
    derived: &CondensateDerived,
    eta: f64,
    delta: f64,
    r_perp: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let pre = density_prefactor(derived, eta);
    let p = SpectralKernel::new(derived, -delta, spec)?.resolution(r_perp, y)?;
    Ok(Estimate {
        value: pre * p.d_value,
        error: pre * p.error,
        converged: p.converged,
    })
}

/// Power spectrum sampled at increasing angular frequencies, linearly
/// interpolated between samples and zero outside them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSpectrum {
    omega: Vec<f64>,
    power: Vec<f64>,
}

impl SampledSpectrum {
    pub fn new(omega: Vec<f64>, power: Vec<f64>) -> Result<Self> {
        if omega.len() != power.len() || omega.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "spectrum",
                value: omega.len() as f64,
                reason: "need at least two (omega, power) pairs of equal length",
            });
        }
        if let Some(i) = omega.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "spectrum",
                value: omega[i + 1],
                reason: "frequencies must be strictly increasing",
            });
        }
        if let Some((index, &value)) = power
            .iter()
            .enumerate()
            .find(|(_, p)| !(**p >= 0.0) || !p.is_finite())
        {
            return Err(Error::NegativeSpectrum { index, value });
        }
        Ok(SampledSpectrum { omega, power })
    }

    /// Triangle of unit area and full base width `width` centred on `center`.
    pub fn unit_triangle(center: f64, width: f64) -> Result<Self> {
        let h = 2.0 / width;
        Self::new(
            vec![center - width / 2.0, center, center + width / 2.0],
            vec![0.0, h, 0.0],
        )
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.omega.clone(),
            self.power.iter().map(|p| p * factor).collect(),
        )
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn value_at(&self, w: f64) -> f64 {
        let n = self.omega.len();
        if w < self.omega[0] || w > self.omega[n - 1] {
            return 0.0;
        }
        let i = self.omega.partition_point(|&x| x <= w).clamp(1, n - 1);
        let (x0, x1) = (self.omega[i - 1], self.omega[i]);
        let t = (w - x0) / (x1 - x0);
        self.power[i - 1] + t * (self.power[i] - self.power[i - 1])
    }
}

/// |ħη/(Mgl₀)|²·∫dω D(ω−Δ, r) S(ω) for a sampled drive spectrum.
///
/// Each linear segment of S is integrated adaptively; every node needs D at a
/// new detuning, so this is far costlier than [`atom_density`].
pub fn spectrum_convolved_rate(
    derived: &CondensateDerived,
    eta: f64,
    delta: f64,
    spectrum: &SampledSpectrum,
    r_perp: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let pre = density_prefactor(derived, eta);
    let failure = Mutex::new(None);
    let all_converged = AtomicBool::new(true);
    let mut total = 0.0;
    let mut error = 0.0;
    for seg in spectrum.omega.windows(2) {
        let r = integrate_1d(
            |w: f64| {
                let s = spectrum.value_at(w);
                if s == 0.0 {
                    return WithError::new(0.0, 0.0);
                }
                let point = SpectralKernel::new(derived, w - delta, spec)
                    .and_then(|k| k.resolution(r_perp, y));
                match point {
                    Ok(p) => {
                        if !p.converged {
                            all_converged.store(false, Ordering::Relaxed);
                        }
                        WithError::new(s * p.d_value, s * p.error)
                    }
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        WithError::new(0.0, 0.0)
                    }
                }
            },
            seg[0],
            seg[1],
            spec,
        );
        total += r.value.value;
        error += r.error_estimate + r.value.error;
        if !r.converged {
            all_converged.store(false, Ordering::Relaxed);
        }
    }
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(Estimate {
        value: pre * total,
        error: pre * error,
        converged: all_converged.into_inner(),
    })
}

/// Cylinder below the cloud, coaxial with gravity, in which outcoupled atoms
/// are counted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionVolume {
    /// Depth of the cylinder centre below the cloud centre (m).
    pub center_depth: f64,
    pub height: f64,
    pub lateral_radius: f64,
}

impl DetectionVolume {
    /// Centre 65 μm below the cloud, 60 μm tall, radius 3a.
    pub fn reference_setup(tf_radius: f64) -> Self {
        DetectionVolume {
            center_depth: 65e-6,
            height: 60e-6,
            lateral_radius: 3.0 * tf_radius,
        }
    }

    pub fn validate(&self, tf_radius: f64) -> Result<()> {
        if !(self.height > 0.0) {
            return Err(Error::InvalidParameter {
                name: "height",
                value: self.height,
                reason: "must be positive",
            });
        }
        if !(self.lateral_radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lateral_radius",
                value: self.lateral_radius,
                reason: "must be positive",
            });
        }
        if !(self.center_depth - self.height / 2.0 > tf_radius) {
            return Err(Error::InvalidParameter {
                name: "center_depth",
                value: self.center_depth,
                reason: "detection volume must lie entirely below the cloud",
            });
        }
        Ok(())
    }

    /// (y_min, y_max) relative to the cloud centre.
    pub fn y_range(&self) -> (f64, f64) {
        (
            -self.center_depth - self.height / 2.0,
            -self.center_depth + self.height / 2.0,
        )
    }

    pub fn with_radius(self, lateral_radius: f64) -> Self {
        DetectionVolume {
            lateral_radius,
            ..self
        }
    }
}

/// ∫D̄ d³r over a detection volume (m³).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeIntegral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
    /// Sample points whose own spectral integral missed its tolerance.
    pub unconverged_points: usize,
}

/// Integrates D̄ at the kernel's detuning over `vol`.
pub fn integrate_d_bar(
    kernel: &SpectralKernel,
    vol: &DetectionVolume,
    spec: &QuadratureSpec,
) -> Result<VolumeIntegral> {
    vol.validate(kernel.derived().tf_radius)?;
    // lengths in units of a so that the absolute tolerance is meaningful
    let a = kernel.derived().tf_radius;
    let a3 = a * a * a;
    let (y_min, y_max) = vol.y_range();
    let failure = Mutex::new(None);
    let points_unconverged = AtomicUsize::new(0);
    let r = integrate_cylindrical_volume(
        |r, y| match kernel.resolution(r * a, y * a) {
            Ok(p) => {
                if !p.converged {
                    points_unconverged.fetch_add(1, Ordering::Relaxed);
                }
                let scale = p.d_bar / p.d_value.max(f64::MIN_POSITIVE);
                WithError::new(p.d_bar, p.error * scale)
            }
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                WithError::new(0.0, 0.0)
            }
        },
        vol.lateral_radius / a,
        y_min / a,
        y_max / a,
        spec,
    );
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    // Far off axis D̄ is tiny and single points may miss their relative
    // target; what matters is that their integrated error stays in budget.
    let error = r.error_estimate + r.value.error;
    Ok(VolumeIntegral {
        value: a3 * r.value.value,
        error: a3 * error,
        converged: r.converged && error <= spec.target(r.value.value),
        evaluations: r.evaluations,
        unconverged_points: points_unconverged.into_inner(),
    })
}

/// (N₀/V_BEC)·(√15 μ_B/(8Mgl₀))²·B_x², converting ∫D̄ d³r into 𝒩.
pub fn rate_prefactor(derived: &CondensateDerived, b_x: f64) -> f64 {
    let c = &derived.constants;
    let coupling = 15f64.sqrt() * c.mu_bohr / (8.0 * derived.energy_unit);
    derived.atom_number / derived.v_bec * (coupling * b_x).powi(2)
}

/// 𝒩 through the density route |ħη/(Mgl₀)|²·(μ/N₀g_s)·∫D̄ d³r. Algebraically
/// equal to [`rate_prefactor`]·∫D̄.
pub fn rate_from_density(derived: &CondensateDerived, b_x: f64, d_bar_integral: f64) -> f64 {
    let eta = derived.eta(b_x);
    density_prefactor(derived, eta) * derived.peak_density() * d_bar_integral
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonochromaticityCheck {
    /// 2Mga/ħ (rad/s).
    pub bandwidth: f64,
    /// ω/Q (rad/s).
    pub linewidth: f64,
    pub ratio: f64,
    pub warning: bool,
}

/// Compares the energy width of the cloud with the cavity linewidth.
pub fn monochromaticity_check(derived: &CondensateDerived, mode: &CpwMode) -> MonochromaticityCheck {
    let bandwidth = derived.bandwidth();
    let linewidth = mode.linewidth();
    let ratio = bandwidth / linewidth;
    MonochromaticityCheck {
        bandwidth,
        linewidth,
        ratio,
        warning: !(ratio >= MONOCHROMATIC_MIN_RATIO),
    }
}

/// 𝒩 for one lateral radius of the detection cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LateralPoint {
    pub lateral_radius: f64,
    pub d_bar_integral: f64,
    pub atom_rate: f64,
}

/// Outcome of the resonant pipeline for one cavity photon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensingResult {
    /// Field amplitude driving the outcoupling: the unattenuated single-photon |B_max| (T).
    pub b_x: f64,
    /// e^{−πd/b}·|B_max| (T).
    pub b_x_attenuated: f64,
    pub b_max_cqed: f64,
    /// η for `b_x` (rad/s).
    pub eta: f64,
    /// ∫D̄ d³r over the detection volume (m³).
    pub d_bar_integral: f64,
    /// 𝒩 with `b_x`.
    pub atom_rate: f64,
    pub quadrature_error: f64,
    /// 𝒩 with `b_x_attenuated`.
    pub atom_rate_attenuated: f64,
    /// 𝒩 with `b_x` through the density route.
    pub atom_rate_cross_check: f64,
    pub monochromatic_ratio: f64,
    /// 𝒩 at lateral radii 2a, 3a and 4a.
    pub lateral_convergence: Vec<LateralPoint>,
    pub converged: bool,
    pub warnings: Vec<String>,
}

/// Atom count for a given field amplitude: the part of the pipeline that does
/// not depend on where the field came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEvaluation {
    pub b_x: f64,
    pub d_bar_integral: VolumeIntegral,
    pub atom_rate: f64,
    pub quadrature_error: f64,
    pub atom_rate_cross_check: f64,
}

/// 𝒩 for a resonant drive (Δ = 0) of amplitude `b_x`.
pub fn atom_rate_for_field(
    kernel: &SpectralKernel,
    b_x: f64,
    vol: &DetectionVolume,
    spec: &QuadratureSpec,
) -> Result<RateEvaluation> {
    let derived = kernel.derived();
    outcoupling_eta(b_x, derived.atom_number, &derived.constants)?;
    let integral = integrate_d_bar(kernel, vol, spec)?;
    let pre = rate_prefactor(derived, b_x);
    Ok(RateEvaluation {
        b_x,
        d_bar_integral: integral,
        atom_rate: pre * integral.value,
        quadrature_error: pre * integral.error,
        atom_rate_cross_check: rate_from_density(derived, b_x, integral.value),
    })
}

/// Minimum admissible distance d₀ + a between the chip surface and the cloud centre.
pub fn min_distance(derived: &CondensateDerived) -> f64 {
    MIN_SURFACE_GAP + derived.tf_radius
}

/// Full resonant pipeline for a cloud centred a distance `d` below the chip.
///
/// The driving field is the single-photon |B_max|; the value attenuated by
/// e^{−πd/b} and the rate it produces are reported alongside. Fails when the
/// cloud is closer than d₀ + a to the surface.
pub fn atom_rate(
    derived: &CondensateDerived,
    geom: &CpwGeometry,
    mode: &CpwMode,
    d: f64,
    vol: &DetectionVolume,
    spec: &QuadratureSpec,
) -> Result<SensingResult> {
    let min = min_distance(derived);
    if !(d >= min) {
        return Err(Error::DistanceTooSmall { d, min });
    }
    atom_rate_unchecked_distance(derived, geom, mode, d, vol, spec)
}

/// As [`atom_rate`] but reporting a too-small distance as a warning instead
/// of failing.
pub fn atom_rate_unchecked_distance(
    derived: &CondensateDerived,
    geom: &CpwGeometry,
    mode: &CpwMode,
    d: f64,
    vol: &DetectionVolume,
    spec: &QuadratureSpec,
) -> Result<SensingResult> {
    let consts = &derived.constants;
    let mut warnings = derived.warnings.clone();
    let min = min_distance(derived);
    if d < min {
        warnings.push(format!(
            "cloud centre {d:.3e} m from the surface, below d0 + a = {min:.3e} m"
        ));
    }
    let b_x = b_max_single_photon(geom, mode, consts)?;
    let b_att = b_at_condensate(geom, mode, d, consts)?;
    let b_cqed = b_max_cqed(geom, mode, consts)?;

    let kernel = SpectralKernel::new(derived, 0.0, &spec.tightened(0.1))?;
    let main = atom_rate_for_field(&kernel, b_x, vol, spec)?;

    let a = derived.tf_radius;
    let mut lateral_convergence = Vec::new();
    let mut converged = main.d_bar_integral.converged;
    for factor in [2.0, 3.0, 4.0] {
        let radius = factor * a;
        let integral = if (radius - vol.lateral_radius).abs() <= 1e-12 * radius {
            main.d_bar_integral
        } else {
            integrate_d_bar(&kernel, &vol.with_radius(radius), spec)?
        };
        converged &= integral.converged;
        lateral_convergence.push(LateralPoint {
            lateral_radius: radius,
            d_bar_integral: integral.value,
            atom_rate: rate_prefactor(derived, b_x) * integral.value,
        });
    }

    let rel = ((main.atom_rate_cross_check - main.atom_rate) / main.atom_rate).abs();
    if rel > 1e-10 {
        warnings.push(format!("density-route cross-check differs by {rel:.2e}"));
    }
    if !converged {
        warnings.push("detection-volume quadrature did not reach the requested tolerance".into());
    }
    let mono = monochromaticity_check(derived, mode);
    if mono.warning {
        warnings.push(format!(
            "cloud bandwidth only {:.2} times the cavity linewidth",
            mono.ratio
        ));
    }

    Ok(SensingResult {
        b_x,
        b_x_attenuated: b_att,
        b_max_cqed: b_cqed,
        eta: derived.eta(b_x),
        d_bar_integral: main.d_bar_integral.value,
        atom_rate: main.atom_rate,
        quadrature_error: main.quadrature_error,
        atom_rate_attenuated: rate_prefactor(derived, b_att) * main.d_bar_integral.value,
        atom_rate_cross_check: main.atom_rate_cross_check,
        monochromatic_ratio: mono.ratio,
        lateral_convergence,
        converged,
        warnings,
    })
}
