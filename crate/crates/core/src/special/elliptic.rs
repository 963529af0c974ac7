//! Complete elliptic integral of the first kind.
//!
//! The argument is the **modulus** k, not the parameter m = k²:
//! K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ).

use crate::error::{Error, Result};

/// Carlson's symmetric integral R_F(x, y, z) by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0015;
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        let ave = (x + y + z) / 3.0;
        let dx = (ave - x) / ave;
        let dy = (ave - y) / ave;
        let dz = (ave - z) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
}

/// K(k) for modulus 0 ≤ k < 1.
pub fn ellipk(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain {
            function: "ellipk",
            value: k,
            domain: "modulus 0 <= k < 1",
        });
    }
    // 1 − k² formed as a product to keep digits near k → 1.
    let kc2 = (1.0 - k) * (1.0 + k);
    Ok(carlson_rf(0.0, kc2, 1.0))
}

/// Complementary modulus k′ = √(1 − k²).
pub fn complementary_modulus(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}
