//! Airy functions Ai, Bi (with derivatives) for real argument, and the
//! complex outgoing-wave combination Ci(x) = Bi(x) + i·Ai(x).
//!
//! Evaluation branches:
//!
//! * `|x| <= 3`: Maclaurin series in f64.
//! * `3 < |x| <= 10`: Taylor expansion of the Airy equation y'' = xy about
//!   the nearest node of a 0.5-spaced table. The table itself is filled once
//!   from the Maclaurin series carried in double-double, since those terms
//!   grow like e^{2|x|^{3/2}/3} while the result does not.
//! * `x > 10`: exponential asymptotic expansions.
//! * `x < -10`: oscillatory asymptotic expansions.
//!
//! Supported range is `x >= -1e4`. Ai underflows to 0 beyond x ≈ 104; Bi
//! overflows there and is reported as a range error.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::dd::Dd;
use crate::error::{Error, Result};

const AI0: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const AIP0: Dd = Dd::new(-0.258_819_403_792_806_8, 2.522_243_111_610_832e-17);
const BI0: Dd = Dd::new(0.614_926_627_446_000_7, 5.089_920_779_489_141_6e-17);
const BIP0: Dd = Dd::new(0.448_288_357_353_826_4, -2.536_323_777_441_730_5e-17);

const SERIES_F64_LIMIT: f64 = 3.0;
const SERIES_DD_LIMIT: f64 = 10.0;
pub const AIRY_MIN_ARG: f64 = -1.0e4;

/// Ai, Ai', Bi, Bi' at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

fn check_arg(function: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x < AIRY_MIN_ARG {
        return Err(Error::Domain {
            function,
            value: x,
            domain: "finite, x >= -1e4",
        });
    }
    Ok(())
}

pub fn airy_ai(x: f64) -> Result<f64> {
    check_arg("airy_ai", x)?;
    Ok(ai_unchecked(x))
}

pub fn airy_bi(x: f64) -> Result<f64> {
    check_arg("airy_bi", x)?;
    let v = all_unchecked(x);
    if !v.bi.is_finite() {
        return Err(Error::Range {
            function: "airy_bi",
            value: x,
        });
    }
    Ok(v.bi)
}

/// All four Airy values. Fails with a range error if Bi or Bi' overflow.
pub fn airy_all(x: f64) -> Result<AiryValues> {
    check_arg("airy_all", x)?;
    let v = all_unchecked(x);
    if !v.bi.is_finite() || !v.bip.is_finite() {
        return Err(Error::Range {
            function: "airy_all",
            value: x,
        });
    }
    Ok(v)
}

/// Ci(x) = Bi(x) + i·Ai(x).
///
/// The imaginary unit is deliberate: this is the combination that carries
/// an outgoing (downward falling) wave in the free-fall Green function,
/// behaving like e^{i(ζ + π/4)}/(√π |x|^{1/4}) for large negative x.
pub fn airy_ci(x: f64) -> Result<Complex64> {
    check_arg("airy_ci", x)?;
    let v = all_unchecked(x);
    if !v.bi.is_finite() {
        return Err(Error::Range {
            function: "airy_ci",
            value: x,
        });
    }
    Ok(Complex64::new(v.bi, v.ai))
}

pub(crate) fn ai_unchecked(x: f64) -> f64 {
    if x > SERIES_DD_LIMIT {
        positive_asymptotic(x).ai
    } else {
        all_unchecked(x).ai
    }
}

pub(crate) fn all_unchecked(x: f64) -> AiryValues {
    let ax = x.abs();
    if ax <= SERIES_F64_LIMIT {
        series_f64(x)
    } else if ax <= SERIES_DD_LIMIT {
        taylor_from_table(x)
    } else if x > 0.0 {
        positive_asymptotic(x)
    } else {
        negative_asymptotic(-x)
    }
}

/// The two canonical solutions f (f(0)=1, f'(0)=0) and g (g(0)=0, g'(0)=1)
/// of y'' = x y and their derivatives, combined with the values at 0.
fn series_f64(x: f64) -> AiryValues {
    let x3 = x * x * x;
    let (mut f, mut fp, mut g, mut gp) = (1.0, 0.0, x, 1.0);
    let mut tf = 1.0; // x^{3k} coefficient term
    let mut tg = x; // x^{3k+1} term
    for k in 1..60 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
        // d/dx x^{n} = n x^{n-1}; every k >= 1 term vanishes at x = 0.
        if x != 0.0 {
            fp += k3 * tf / x;
            gp += (k3 + 1.0) * tg / x;
        }
        if tf.abs() < 1e-18 * f.abs().max(1.0) && tg.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    let (ai0, aip0, bi0, bip0) = (AI0.hi, AIP0.hi, BI0.hi, BIP0.hi);
    AiryValues {
        ai: ai0 * f + aip0 * g,
        aip: ai0 * fp + aip0 * gp,
        bi: bi0 * f + bip0 * g,
        bip: bi0 * fp + bip0 * gp,
    }
}

const NODE_SPACING: f64 = 0.5;
const NODE_COUNT: usize = (2.0 * SERIES_DD_LIMIT / NODE_SPACING) as usize + 1;

fn node_table() -> &'static [AiryValues; NODE_COUNT] {
    static TABLE: OnceLock<[AiryValues; NODE_COUNT]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|j| series_dd(-SERIES_DD_LIMIT + NODE_SPACING * j as f64))
    })
}

/// Ai, Bi and derivatives from the Taylor series about the nearest table node.
/// Coefficients follow c_{n+2} = (x₀c_n + c_{n−1})/((n+1)(n+2)).
fn taylor_from_table(x: f64) -> AiryValues {
    let j = ((x + SERIES_DD_LIMIT) / NODE_SPACING).round() as usize;
    let j = j.min(NODE_COUNT - 1);
    let x0 = -SERIES_DD_LIMIT + NODE_SPACING * j as f64;
    let node = node_table()[j];
    let h = x - x0;
    let expand = |y0: f64, y1: f64| -> (f64, f64) {
        // c[n-1], c[n], c[n+1] kept as a sliding window
        let (mut cm1, mut c0, mut c1) = (0.0, y0, y1);
        let mut hp = 1.0; // h^n
        let mut val = 0.0;
        let mut der = 0.0;
        for n in 0..60 {
            let term = c0 * hp;
            val += term;
            // d/dh of c_{n+1} h^{n+1}
            der += (n + 1) as f64 * c1 * hp;
            let c2 = (x0 * c0 + cm1) / ((n + 1) as f64 * (n + 2) as f64);
            if n > 4 && term.abs() <= 1e-18 * val.abs() && (c1 * hp).abs() <= 1e-18 * der.abs() {
                break;
            }
            cm1 = c0;
            c0 = c1;
            c1 = c2;
            hp *= h;
        }
        (val, der)
    };
    let (ai, aip) = expand(node.ai, node.aip);
    let (bi, bip) = expand(node.bi, node.bip);
    AiryValues { ai, aip, bi, bip }
}

fn series_dd(x: f64) -> AiryValues {
    let xd = Dd::from_f64(x);
    let x3 = (xd * xd).mul_f64(x);
    let mut tf = Dd::from_f64(1.0);
    let mut tg = xd;
    let mut f = tf;
    let mut g = tg;
    // Derivative sums accumulate 3k·a_k·x^{3k-1} and (3k+1)·b_k·x^{3k}.
    let mut fp = Dd::ZERO;
    let mut gp = Dd::from_f64(1.0);
    for k in 1..120 {
        let k3 = 3.0 * k as f64;
        tf = (tf * x3).div_f64((k3 - 1.0) * k3);
        tg = (tg * x3).div_f64(k3 * (k3 + 1.0));
        f = f + tf;
        g = g + tg;
        fp = fp + tf.mul_f64(k3);
        gp = gp + tg.mul_f64(k3 + 1.0);
        if tf.abs_hi() < 1e-34 * f.abs_hi().max(1.0) && tg.abs_hi() < 1e-34 * g.abs_hi().max(1.0)
        {
            break;
        }
    }
    // fp currently holds Σ 3k a_k x^{3k}; divide by x (x != 0 on this branch).
    let fp = fp.div_f64(x);
    // gp holds 1 + Σ (3k+1) b_k x^{3k+1}; the derivative needs x^{3k}, so
    // divide the k >= 1 part by x.
    let gp = (gp - Dd::from_f64(1.0)).div_f64(x) + Dd::from_f64(1.0);
    AiryValues {
        ai: (AI0 * f + AIP0 * g).to_f64(),
        aip: (AI0 * fp + AIP0 * gp).to_f64(),
        bi: (BI0 * f + BIP0 * g).to_f64(),
        bip: (BI0 * fp + BIP0 * gp).to_f64(),
    }
}

/// Coefficients u_k, v_k of the Airy asymptotic expansions.
fn uv_coefficients() -> &'static [(f64, f64); 40] {
    use std::sync::OnceLock;
    static UV: OnceLock<[(f64, f64); 40]> = OnceLock::new();
    UV.get_or_init(|| {
        let mut out = [(0.0, 0.0); 40];
        let mut u = 1.0;
        out[0] = (1.0, 1.0);
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            *slot = (u, v);
        }
        out
    })
}

/// Sums Σ sign_k c_k ζ^{-k} until terms stop shrinking or become negligible.
fn asymptotic_sum(zeta: f64, alternate: bool, pick_v: bool) -> f64 {
    let uv = uv_coefficients();
    let inv = 1.0 / zeta;
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for (k, &(u, v)) in uv.iter().enumerate() {
        let c = if pick_v { v } else { u };
        let sign = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * c * pow;
        if term.abs() > last {
            break;
        }
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        last = term.abs();
        pow *= inv;
    }
    sum
}

fn positive_asymptotic(x: f64) -> AiryValues {
    let sqrt_x = x.sqrt();
    let zeta = 2.0 / 3.0 * x * sqrt_x;
    let x14 = sqrt_x.sqrt();
    let sp = PI.sqrt();
    let decay = (-zeta).exp();
    let grow = zeta.exp();
    AiryValues {
        ai: decay / (2.0 * sp * x14) * asymptotic_sum(zeta, true, false),
        aip: -x14 * decay / (2.0 * sp) * asymptotic_sum(zeta, true, true),
        bi: grow / (sp * x14) * asymptotic_sum(zeta, false, false),
        bip: x14 * grow / sp * asymptotic_sum(zeta, false, true),
    }
}

/// Even/odd split sums for the oscillatory expansions:
/// returns (Σ(-1)^k c_{2k} ζ^{-2k}, Σ(-1)^k c_{2k+1} ζ^{-2k-1}).
fn split_sums(zeta: f64, pick_v: bool) -> (f64, f64) {
    let uv = uv_coefficients();
    let inv = 1.0 / zeta;
    let (mut even, mut odd) = (0.0, 0.0);
    let mut pow = 1.0;
    let mut last = f64::INFINITY;
    for (k, &(u, v)) in uv.iter().enumerate() {
        let c = if pick_v { v } else { u };
        let term = c * pow;
        if term.abs() > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        if term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        pow *= inv;
    }
    (even, odd)
}

/// Ai(-z), Bi(-z) and derivatives (with respect to the original argument).
fn negative_asymptotic(z: f64) -> AiryValues {
    let sqrt_z = z.sqrt();
    let zeta = 2.0 / 3.0 * z * sqrt_z;
    let z14 = sqrt_z.sqrt();
    let sp = PI.sqrt();
    // cos(ζ - π/4) and sin(ζ - π/4) without subtracting a rounded π/4.
    let (s, c) = zeta.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let cm = (c + s) * r;
    let sm = (s - c) * r;
    let (pu, qu) = split_sums(zeta, false);
    let (pv, qv) = split_sums(zeta, true);
    let amp = 1.0 / (sp * z14);
    let damp = z14 / sp;
    AiryValues {
        ai: amp * (cm * pu + sm * qu),
        bi: amp * (-sm * pu + cm * qu),
        // d/dx at x = -z
        aip: damp * (sm * pv - cm * qv),
        bip: damp * (cm * pv + sm * qv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        let v = airy_all(0.0).unwrap();
        assert!((v.ai - 0.355_028_053_887_817_24).abs() < 1e-15);
        assert!((v.bi - 0.614_926_627_446_000_7).abs() < 1e-15);
        assert!((v.aip + 0.258_819_403_792_806_8).abs() < 1e-15);
        assert!((v.bip - 0.448_288_357_353_826_4).abs() < 1e-15);
    }

    #[test]
    fn ai_decays() {
        let ai10 = airy_ai(10.0).unwrap();
        assert!(ai10 > 0.0 && ai10 < 1e-9);
        assert_eq!(airy_ai(300.0).unwrap(), 0.0);
    }

    #[test]
    fn bi_overflow_is_an_error() {
        assert!(matches!(airy_bi(120.0), Err(Error::Range { .. })));
        assert!(matches!(airy_ci(120.0), Err(Error::Range { .. })));
        assert!(airy_bi(100.0).unwrap().is_finite());
    }

    #[test]
    fn rejects_non_finite_and_far_negative() {
        assert!(airy_ai(f64::NAN).is_err());
        assert!(airy_ai(-2e4).is_err());
        assert!(airy_ai(-9e3).is_ok());
    }

    #[test]
    fn ci_components() {
        let c = airy_ci(0.0).unwrap();
        assert!((c.re - 0.614_926_627_4).abs() < 1e-10);
        assert!((c.im - 0.355_028_053_9).abs() < 1e-10);
        assert!(airy_ci(10.0).unwrap().im < 1e-9);
    }
}
