//! Independent oracles used by the integration tests. Nothing here calls into
//! the library's evaluation paths.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub const AI0_90: &str = "0.355028053887817239260063186004183176397979174199177240583326510300810042450126712957174246";
pub const AIP0_90: &str = "-0.258819403792806798405183560189203963479091138354934582210001813856102772676790280654196406";
pub const BI0_90: &str = "0.614926627446000735150922369093613553594728188648596505040878753014296519305520640529387343";
pub const BIP0_90: &str = "0.448288357353826357914823710398828390866226799212262061082808778372330755009780647185046574";

/// Parses a decimal literal into an exact rational.
pub fn decimal(s: &str) -> BigRational {
    let neg = s.starts_with('-');
    let s = s.trim_start_matches('-');
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(&digits).unwrap();
    let den = BigInt::from(10).pow(frac.len() as u32);
    let r = BigRational::new(num, den);
    if neg {
        -r
    } else {
        r
    }
}

/// Exact rational for an f64 that is a multiple of 1/64.
pub fn rational_from_grid(x: f64) -> BigRational {
    let scaled = (x * 64.0).round();
    assert_eq!(scaled / 64.0, x, "grid value {x} is not a multiple of 1/64");
    BigRational::new(BigInt::from(scaled as i64), BigInt::from(64))
}

fn small_enough(term: &BigRational, eps: &BigRational) -> bool {
    term.abs() < *eps
}

/// Maclaurin oracle for (Ai, Bi) in exact rational arithmetic, using the
/// 90-digit values at the origin.
pub fn airy_series_oracle(x: f64) -> (f64, f64) {
    let xr = rational_from_grid(x);
    let x3 = &xr * &xr * &xr;
    let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(45));
    let mut tf = BigRational::one();
    let mut tg = xr.clone();
    let mut f = tf.clone();
    let mut g = tg.clone();
    let mut k: i64 = 1;
    loop {
        let k3 = 3 * k;
        tf = &tf * &x3 / BigRational::from_integer(BigInt::from((k3 - 1) * k3));
        tg = &tg * &x3 / BigRational::from_integer(BigInt::from(k3 * (k3 + 1)));
        f += &tf;
        g += &tg;
        // the terms rise before they fall; only stop once past the peak
        if (k as f64) > x.abs().powf(1.5) && small_enough(&tf, &eps) && small_enough(&tg, &eps)
        {
            break;
        }
        k += 1;
    }
    let ai = decimal(AI0_90) * &f + decimal(AIP0_90) * &g;
    let bi = decimal(BI0_90) * &f + decimal(BIP0_90) * &g;
    (ai.to_f64().unwrap(), bi.to_f64().unwrap())
}

/// Power-series oracle for J₀ in exact rational arithmetic.
pub fn j0_series_oracle(x: f64) -> f64 {
    let xr = rational_from_grid(x);
    let q = -(&xr * &xr) / BigRational::from_integer(BigInt::from(4));
    let eps = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
    let mut term = BigRational::one();
    let mut sum = term.clone();
    let mut k: i64 = 1;
    loop {
        term = &term * &q / BigRational::from_integer(BigInt::from(k * k));
        sum += &term;
        if (k as f64) > x && small_enough(&term, &eps) {
            break;
        }
        k += 1;
    }
    if sum.is_zero() {
        0.0
    } else {
        sum.to_f64().unwrap()
    }
}

/// K(k) = π / (2·AGM(1, k′)).
pub fn ellipk_agm_oracle(k: f64) -> f64 {
    let mut a = 1.0_f64;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 1e-17 * an {
            a = an;
            break;
        }
        a = an;
        b = bn;
    }
    std::f64::consts::PI / (2.0 * a)
}

/// Composite Simpson with Richardson extrapolation over n and 2n panels.
pub fn richardson_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let simpson = |n: usize| {
        let n = if n % 2 == 1 { n + 1 } else { n };
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    };
    let coarse = simpson(n);
    let fine = simpson(2 * n);
    fine + (fine - coarse) / 15.0
}

/// Richardson-extrapolated trapezoid rule at n and 2n points.
pub fn richardson_trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let trap = |n: usize| {
        let h = (b - a) / n as f64;
        let mut s = 0.5 * (f(a) + f(b));
        for i in 1..n {
            s += f(a + i as f64 * h);
        }
        s * h
    };
    let t1 = trap(n);
    let t2 = trap(2 * n);
    t2 + (t2 - t1) / 3.0
}
