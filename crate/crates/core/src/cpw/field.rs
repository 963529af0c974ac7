//! Quasi-static magnetic field of the odd half-wave mode as a sum over
//! transverse harmonics, and the mode volume built from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{CpwGeometry, CpwMode};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, integrate_semi_infinite, QuadratureSpec, TailStrategy};
use crate::special::sinc_half;

/// Hard cap on the number of harmonics summed by [`field_air_side`].
pub const SERIES_MAX_TERMS: u32 = 10_000;

const SERIES_REL_TOL: f64 = 1e-10;

/// A point in the primed CPW frame (metres).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpwPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CpwPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        CpwPoint { x, y, z }
    }
}

/// Complex field phasor in the primed frame, with series bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldVector {
    pub bx: Complex64,
    pub by: Complex64,
    pub bz: Complex64,
    /// Harmonics summed.
    pub terms: u32,
    pub converged: bool,
    /// Set when a validity condition of the approximation is not met
    /// (slowly converging series at the surface, or b not ≪ λ, h).
    pub warning: bool,
}

impl FieldVector {
    /// |B| at the instant the field is largest over one oscillation period.
    ///
    /// For a phasor v the real field is Re(v e^{−iωt}); its squared length
    /// peaks at (|v|² + |v·v|)/2.
    pub fn peak_magnitude(&self) -> f64 {
        let c = [self.bx, self.by, self.bz];
        let norm2: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let dot: Complex64 = c.iter().map(|z| z * z).sum();
        (0.5 * (norm2 + dot.norm())).sqrt()
    }

    /// Σ|B_i|², the time-averaged squared magnitude times two.
    pub fn norm_sqr(&self) -> f64 {
        self.bx.norm_sqr() + self.by.norm_sqr() + self.bz.norm_sqr()
    }
}

/// sin(πt) with exact zeros at integer t.
fn sin_pi(t: f64) -> f64 {
    let r = t.rem_euclid(2.0);
    // fold into [−1/2, 1/2] where sin is evaluated directly
    let u = if r <= 0.5 {
        r
    } else if r <= 1.5 {
        1.0 - r
    } else {
        r - 2.0
    };
    (PI * u).sin()
}

/// cos(πt) with exact zeros at half-integer t.
fn cos_pi(t: f64) -> f64 {
    sin_pi(0.5 - t)
}

/// Per-geometry constants of the series.
struct Series {
    b: f64,
    delta: f64,
    delta_bar: f64,
    p: Complex64,
    /// 2bv/λ
    f_coef: f64,
    /// (2b/λ_g)·q
    z_coef: f64,
}

impl Series {
    fn new(geom: &CpwGeometry, mode: &CpwMode, v0: f64, consts: &PhysicalConstants) -> Self {
        let b = geom.half_width();
        let eta = consts.vacuum_impedance();
        let p = Complex64::new(
            0.0,
            -consts.mu0 * 4.0 * v0 / (eta * b) * mode.lambda_free / mode.lambda_g,
        );
        Series {
            b,
            delta: geom.delta(),
            delta_bar: geom.delta_bar(),
            p,
            f_coef: 2.0 * b * mode.v / mode.lambda_free,
            z_coef: 2.0 * b / mode.lambda_g * mode.q,
        }
    }

    fn s(&self, n: u32) -> f64 {
        sinc_half(n, self.delta) * sin_pi(n as f64 * self.delta_bar / 2.0)
    }

    fn f(&self, n: u32) -> f64 {
        (1.0 + (self.f_coef / n as f64).powi(2)).sqrt()
    }

    /// Real bracketed sums of harmonic n at (x, |y|), without p and z factors:
    /// (s/F cos, s sin, q s/(nF) sin · 2b/λ_g).
    fn term(&self, n: u32, x: f64, ay: f64) -> [f64; 3] {
        let s = self.s(n);
        if s == 0.0 {
            return [0.0; 3];
        }
        let f = self.f(n);
        let nf = n as f64;
        let decay = (-nf * PI * f * ay / self.b).exp();
        // x/b first so that x = b gives an exact integer
        let t = nf * (x / self.b);
        [
            s / f * cos_pi(t) * decay,
            s * sin_pi(t) * decay,
            self.z_coef * s / (nf * f) * sin_pi(t) * decay,
        ]
    }

    /// Bound on Σ_{m>n} of the bracketed terms, weighted by the z factors.
    fn tail_bound(&self, n: u32, ay: f64, wt: f64, wz: f64) -> f64 {
        let r = (-PI * ay / self.b).exp();
        if r >= 1.0 {
            return f64::INFINITY;
        }
        let m = (n + 1) as f64;
        // |s_m| ≤ 2/(mπδ) and F_m ≥ 1
        let s_bound = (2.0 / (m * PI * self.delta)).min(1.0);
        let geo = r.powf(m) / (1.0 - r);
        s_bound * geo * (2.0 * wt + self.z_coef.abs() / m * wz)
    }

    fn assemble(&self, sums: [f64; 3], wt: f64, wz: f64) -> (Complex64, Complex64, Complex64) {
        (
            self.p * (sums[0] * wt),
            self.p * (sums[1] * wt),
            self.p * (sums[2] * wz),
        )
    }
}

fn check_point(geom: &CpwGeometry, mode: &CpwMode, pt: &CpwPoint) -> Result<()> {
    let b = geom.half_width();
    let slack = 1e-12 * b;
    if !(pt.x >= -slack && pt.x <= b + slack) {
        return Err(Error::Domain {
            function: "cpw field",
            value: pt.x,
            domain: "0 <= x' <= b",
        });
    }
    let ls = 1e-12 * mode.length;
    if !(pt.z >= -ls && pt.z <= mode.length + ls) {
        return Err(Error::Domain {
            function: "cpw field",
            value: pt.z,
            domain: "0 <= z' <= L",
        });
    }
    if !pt.y.is_finite() {
        return Err(Error::Domain {
            function: "cpw field",
            value: pt.y,
            domain: "finite y'",
        });
    }
    Ok(())
}

fn sum_series(
    geom: &CpwGeometry,
    mode: &CpwMode,
    pt: &CpwPoint,
    v0: f64,
    consts: &PhysicalConstants,
    n_max: u32,
) -> FieldVector {
    let ser = Series::new(geom, mode, v0, consts);
    let ay = pt.y.abs();
    let tz = pt.z / mode.length;
    let wt = sin_pi(tz);
    let wz = cos_pi(tz);
    let mut sums = [0.0f64; 3];
    let mut converged = false;
    let mut terms = 0;
    for n in 1..=n_max {
        let t = ser.term(n, pt.x, ay);
        for i in 0..3 {
            sums[i] += t[i];
        }
        terms = n;
        let size = (sums[0] * wt).hypot(sums[1] * wt).hypot(sums[2] * wz);
        let tail = ser.tail_bound(n, ay, wt.abs(), wz.abs());
        if tail <= SERIES_REL_TOL * size || tail < f64::MIN_POSITIVE {
            converged = true;
            break;
        }
    }
    let (bx, by, bz) = ser.assemble(sums, wt, wz);
    FieldVector {
        bx,
        by,
        bz,
        terms,
        converged,
        warning: !converged,
    }
}

/// Field on the air side (y′ ≤ 0) for slot voltage `v0`, summing harmonics
/// until a geometric bound on the remainder falls below 1e-10 of the partial
/// sum or [`SERIES_MAX_TERMS`] is reached.
///
/// At y′ = 0 the harmonics decay only algebraically and the sum is cut at the
/// cap with `converged = false`.
pub fn field_air_side(
    geom: &CpwGeometry,
    mode: &CpwMode,
    pt: CpwPoint,
    v0: f64,
    consts: &PhysicalConstants,
) -> Result<FieldVector> {
    field_air_side_truncated(geom, mode, pt, v0, consts, SERIES_MAX_TERMS)
}

/// As [`field_air_side`] with an explicit cap on the number of harmonics.
pub fn field_air_side_truncated(
    geom: &CpwGeometry,
    mode: &CpwMode,
    pt: CpwPoint,
    v0: f64,
    consts: &PhysicalConstants,
    n_max: u32,
) -> Result<FieldVector> {
    check_point(geom, mode, &pt)?;
    if pt.y > 0.0 {
        return Err(Error::Domain {
            function: "field_air_side",
            value: pt.y,
            domain: "y' <= 0",
        });
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            value: 0.0,
            reason: "at least one harmonic is required",
        });
    }
    Ok(sum_series(geom, mode, &pt, v0, consts, n_max))
}

/// Field inside the substrate (0 ≤ y′ ≤ h) from the mirror relations
/// B_x → −B_x(−y′), B_y → B_y(−y′), B_z → 0.
///
/// `warning` is raised when b is not small against λ and h, where the mirror
/// picture stops being a good approximation.
pub fn field_substrate_side(
    geom: &CpwGeometry,
    mode: &CpwMode,
    pt: CpwPoint,
    v0: f64,
    consts: &PhysicalConstants,
) -> Result<FieldVector> {
    check_point(geom, mode, &pt)?;
    if !(pt.y >= 0.0 && pt.y <= geom.substrate_thickness) {
        return Err(Error::Domain {
            function: "field_substrate_side",
            value: pt.y,
            domain: "0 <= y' <= h",
        });
    }
    let mirrored = CpwPoint { y: -pt.y, ..pt };
    let air = sum_series(geom, mode, &mirrored, v0, consts, SERIES_MAX_TERMS);
    let b = geom.half_width();
    let thin = b < 0.1 * mode.lambda_free && b < 0.1 * geom.substrate_thickness;
    Ok(FieldVector {
        bx: -air.bx,
        by: air.by,
        bz: Complex64::new(0.0, 0.0),
        terms: air.terms,
        converged: air.converged,
        warning: air.warning || !thin,
    })
}

/// Closed-form and numerically integrated mode volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeVolume {
    pub n_transverse: u32,
    /// Lb²/π; only given for the fundamental transverse mode.
    pub closed_form: Option<f64>,
    pub numeric: f64,
    pub error_estimate: f64,
}

/// V_c = ∫|B|²d³r / |B_max|² for the transverse harmonic `mode.n_transverse`.
///
/// The mode field is the single harmonic n of the series (air side plus its
/// substrate mirror), normalised by its own peak, integrated over both halves
/// x′ ∈ [−b, b], the air half-space and the substrate slab. The z′ profile
/// integrates to L/2 in closed form.
pub fn mode_volume(
    geom: &CpwGeometry,
    mode: &CpwMode,
    consts: &PhysicalConstants,
) -> Result<ModeVolume> {
    let n = mode.n_transverse;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n_transverse",
            value: 0.0,
            reason: "transverse mode index starts at 1",
        });
    }
    // the overall prefactor cancels in the ratio, so unit slot voltage
    let ser = Series::new(geom, mode, 1.0, consts);
    let b = geom.half_width();
    let s = ser.s(n);
    if s == 0.0 {
        return Err(Error::InvalidParameter {
            name: "n_transverse",
            value: n as f64,
            reason: "harmonic not excited by this geometry (s_n = 0)",
        });
    }
    let f = ser.f(n);
    // transverse and longitudinal peaks sit at y′ = 0, at z′ = L/2 and z′ = 0
    let z_amp = ser.z_coef / (n as f64 * f);
    let peak2 = s * s * (1.0 / (f * f)).max(1.0).max(z_amp * z_amp);

    let spec = QuadratureSpec::new(1e-10, 1e-300, 400)?;
    // ∫₀^b of each squared component at depth |y|, with the z′ factor L/2
    let slab = |ay: f64, substrate: bool| -> f64 {
        let r = integrate_1d(
            |x: f64| {
                let t = ser.term(n, x, ay);
                let z2 = if substrate { 0.0 } else { t[2] * t[2] };
                t[0] * t[0] + t[1] * t[1] + z2
            },
            0.0,
            b,
            &spec,
        );
        r.value
    };
    let gamma = n as f64 * PI * f / b;
    let y_spec = spec.with_tail(TailStrategy::SuccessiveIntervals {
        panel_width: 1.0 / gamma,
    });
    let air = integrate_semi_infinite(|u: f64| slab(u, false), &y_spec)?;
    let h = geom.substrate_thickness;
    // beyond 60/γ the slab integrand is below e^{−120} of its surface value
    let sub = integrate_1d(|u: f64| slab(u, true), 0.0, h.min(60.0 / gamma), &spec);
    let half_length = mode.length / 2.0;
    let scale = 2.0 * half_length / peak2;
    let numeric = scale * (air.value + sub.value);
    let error_estimate = scale * (air.error_estimate + sub.error_estimate);
    Ok(ModeVolume {
        n_transverse: n,
        closed_form: (n == 1).then(|| mode.length * b * b / PI),
        numeric,
        error_estimate,
    })
}
