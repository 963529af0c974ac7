//! Special-function kernel: elliptic K, Airy Ai/Bi/Ci, Bessel J₀/J₁ and the
//! slot-aperture sinc factor.

mod airy;
mod bessel;
mod dd;
mod elliptic;

pub use airy::{airy_ai, airy_all, airy_bi, airy_ci, AiryValues, AIRY_MIN_ARG};
pub use bessel::{bessel_j0, bessel_j1};
pub use elliptic::{carlson_rf, complementary_modulus, ellipk};

pub(crate) use airy::{ai_unchecked, all_unchecked as airy_all_unchecked};
pub(crate) use bessel::j0_unchecked;

pub use num_complex::Complex64 as ComplexValue;

/// sin(u)/u with u = nπδ/2; the aperture factor of the slot field expansion.
///
/// Defined for n ≥ 1 and δ ∈ [0, 1); continuous at δ = 0 where it equals 1.
pub fn sinc_half(n: u32, delta: f64) -> f64 {
    let u = n as f64 * std::f64::consts::PI * delta / 2.0;
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}
