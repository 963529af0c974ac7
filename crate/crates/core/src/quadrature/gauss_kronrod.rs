use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{IntegralResult, QuadValue, QuadratureSpec};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_068_074_408,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub(crate) const NODES_PER_PANEL: usize = 21;

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn abscissae(a: f64, b: f64) -> [f64; NODES_PER_PANEL] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut xs = [0.0; NODES_PER_PANEL];
    for i in 0..10 {
        xs[2 * i] = c - h * XGK[i];
        xs[2 * i + 1] = c + h * XGK[i];
    }
    xs[20] = c;
    xs
}

/// One Gauss–Kronrod panel from the 21 integrand values at [`abscissae`].
fn gk21_combine<T: QuadValue>(a: f64, b: f64, fv: &[T; NODES_PER_PANEL]) -> (T, f64) {
    let h = 0.5 * (b - a);
    let fc = fv[20];
    let mut kron = fc * WGK[10];
    let mut gauss = T::zero();
    let mut res_abs = WGK[10] * fc.magnitude();
    for i in 0..10 {
        let pair = fv[2 * i] + fv[2 * i + 1];
        kron = kron + pair * WGK[i];
        res_abs += WGK[i] * (fv[2 * i].magnitude() + fv[2 * i + 1].magnitude());
        if i % 2 == 1 {
            gauss = gauss + pair * WG[i / 2];
        }
    }
    let mean = kron * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).magnitude();
    for i in 0..10 {
        res_asc += WGK[i] * ((fv[2 * i] - mean).magnitude() + (fv[2 * i + 1] - mean).magnitude());
    }
    let result = kron * h;
    let res_abs = res_abs * h.abs();
    let res_asc = res_asc * h.abs();
    let mut err = ((kron - gauss) * h).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

fn panel_seq<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Panel<T> {
    let xs = abscissae(a, b);
    let fv: [T; NODES_PER_PANEL] = std::array::from_fn(|i| f(xs[i]));
    let (value, error) = gk21_combine(a, b, &fv);
    Panel { a, b, value, error }
}

fn panel_par<T: QuadValue, F: Fn(f64) -> T + Sync>(f: &F, a: f64, b: f64) -> Panel<T> {
    let xs = abscissae(a, b);
    let vals: Vec<T> = xs.par_iter().map(|&x| f(x)).collect();
    let fv: [T; NODES_PER_PANEL] = std::array::from_fn(|i| vals[i]);
    let (value, error) = gk21_combine(a, b, &fv);
    Panel { a, b, value, error }
}

fn adapt<T: QuadValue>(
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    mut panel: impl FnMut(f64, f64) -> Panel<T>,
) -> IntegralResult<T> {
    let first = panel(a, b);
    let mut evaluations = NODES_PER_PANEL;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    while error > spec.target(value.magnitude()) && subdivisions < spec.max_subdivisions {
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        // interval too small to split further in floating point
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = panel(worst.a, mid);
        let right = panel(mid, worst.b);
        evaluations += 2 * NODES_PER_PANEL;
        subdivisions += 1;
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
        // resum occasionally to shed accumulated rounding in the running totals
        if subdivisions % 64 == 0 {
            value = heap.iter().fold(T::zero(), |acc, p| acc + p.value);
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().fold(T::zero(), |acc, p| acc + p.value);
    let error: f64 = heap.iter().map(|p| p.error).sum();
    IntegralResult {
        value,
        error_estimate: error,
        evaluations,
        converged: error <= spec.target(value.magnitude()),
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Non-convergence within `spec.max_subdivisions` panels is reported through
/// `converged = false` together with the best value and its error estimate.
pub fn integrate_1d<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> IntegralResult<T> {
    if a == b {
        return IntegralResult {
            value: T::zero(),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    adapt(a, b, spec, |lo, hi| panel_seq(&f, lo, hi))
}

/// As [`integrate_1d`], evaluating the 21 nodes of each panel concurrently.
pub fn integrate_1d_par<T: QuadValue>(
    f: impl Fn(f64) -> T + Sync,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> IntegralResult<T> {
    if a == b {
        return IntegralResult {
            value: T::zero(),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    adapt(a, b, spec, |lo, hi| panel_par(&f, lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn spec(rel: f64) -> QuadratureSpec {
        QuadratureSpec::new(rel, 1e-15, 200).unwrap()
    }

    #[test]
    fn polynomial_exact() {
        let r = integrate_1d(|x: f64| x * x, 0.0, 1.0, &spec(1e-12));
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.converged);
        assert_eq!(r.evaluations, 21);
    }

    #[test]
    fn endpoint_sqrt_profile() {
        let r = integrate_1d(|x: f64| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, &spec(1e-12));
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-10, "{r:?}");
        assert!(r.converged);
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() <= r.error_estimate.max(1e-15));
    }

    #[test]
    fn complex_integrand() {
        // ∫₀^π e^{ix} dx = 2i
        let r = integrate_1d(|x: f64| Complex64::new(x.cos(), x.sin()), 0.0, std::f64::consts::PI, &spec(1e-12));
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn non_convergence_is_reported() {
        let tight = QuadratureSpec::new(1e-14, 1e-300, 8).unwrap();
        let r = integrate_1d(|x: f64| (1.0 / x).sin() * x.sqrt(), 1e-6, 1.0, &tight);
        assert!(!r.converged);
        assert!(r.error_estimate > 0.0);
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let s = integrate_1d(f, 0.0, 10.0, &spec(1e-10));
        let p = integrate_1d_par(f, 0.0, 10.0, &spec(1e-10));
        assert_eq!(s.value, p.value);
        assert_eq!(s.evaluations, p.evaluations);
    }

    #[test]
    fn empty_interval() {
        let r = integrate_1d(|_x: f64| 1.0, 2.0, 2.0, &spec(1e-8));
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }
}
