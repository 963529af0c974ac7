//! Bessel functions J₀ and J₁ for nonnegative real argument.
//!
//! Power series for x ≤ 8, Miller backward recurrence for 8 < x < 25 and
//! Hankel asymptotic expansions beyond.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

pub fn bessel_j0(x: f64) -> Result<f64> {
    check(x, "bessel_j0")?;
    Ok(j0_unchecked(x))
}

pub fn bessel_j1(x: f64) -> Result<f64> {
    check(x, "bessel_j1")?;
    Ok(j01_unchecked(x).1)
}

fn check(x: f64, function: &'static str) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function,
            value: x,
            domain: "finite x >= 0",
        });
    }
    Ok(())
}

#[inline]
pub(crate) fn j0_unchecked(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        series(x).0
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x).0
    } else {
        hankel(x, 0)
    }
}

pub(crate) fn j01_unchecked(x: f64) -> (f64, f64) {
    if x <= SERIES_LIMIT {
        series(x)
    } else if x < ASYMPTOTIC_LIMIT {
        miller(x)
    } else {
        (hankel(x, 0), hankel(x, 1))
    }
}

fn series(x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let (mut t0, mut t1) = (1.0, 0.5 * x);
    let (mut j0, mut j1) = (t0, t1);
    for k in 1..40 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        j0 += t0;
        j1 += t1;
        if t0.abs() < 1e-18 && t1.abs() < 1e-18 {
            break;
        }
    }
    (j0, j1)
}

/// Backward recurrence J_{k−1} = (2k/x) J_k − J_{k+1}, normalised with
/// J₀ + 2 Σ J_{2m} = 1.
fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x as usize + 40) / 2);
    let (mut jp1, mut j) = (0.0_f64, 1e-30_f64);
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds J_{k-1}
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * j;
        }
        if k - 1 == 1 {
            j1 = j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += j;
    (j / norm, j1 / norm)
}

fn hankel(x: f64, order: u32) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let inv8x = 1.0 / (8.0 * x);
    // a_k(ν)/x^k with a_k = Π_{j=1..k} (μ − (2j−1)²) / (k! 8^k)
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) * inv8x / kf;
        if term.abs() > last {
            break;
        }
        last = term.abs();
        // (−1)^{⌊k/2⌋} sign pattern; odd k feed Q, even k feed P
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // ω = x − νπ/2 − π/4
    let (cw, sw) = match order {
        0 => ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2),
        _ => ((s - c) * FRAC_1_SQRT_2, (-s - c) * FRAC_1_SQRT_2),
    };
    (2.0 / (PI * x)).sqrt() * (p * cw - q * sw)
}
