mod common;

use mwsense::condensate::{derive, tf_profile, CondensateDerived, CondensateParams, SpectralKernel};
use mwsense::quadrature::{integrate_cylindrical_volume, QuadratureSpec};
use mwsense::sensing::DetectionVolume;
use mwsense::special::{airy_ai, airy_bi, bessel_j0};
use mwsense::RB87;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

fn reference() -> CondensateDerived {
    derive(&CondensateParams::reference_setup(), &RB87).unwrap()
}

fn shared_kernel() -> &'static SpectralKernel {
    static K: OnceLock<SpectralKernel> = OnceLock::new();
    K.get_or_init(|| SpectralKernel::new(&reference(), 0.0, &QuadratureSpec::default()).unwrap())
}

/// Simpson on a uniform grid of n (even) panels over values already sampled.
fn simpson_samples(v: &[f64], h: f64) -> f64 {
    let n = v.len() - 1;
    assert!(n % 2 == 0);
    let mut s = v[0] + v[n];
    for (i, x) in v.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * x } else { 2.0 * x };
    }
    s * h / 3.0
}

/// Richardson-extrapolated Simpson from one grid of n panels and its
/// every-other subsample.
fn richardson_samples(v: &[f64], h: f64) -> f64 {
    let fine = simpson_samples(v, h);
    let coarse_v: Vec<f64> = v.iter().step_by(2).copied().collect();
    let coarse = simpson_samples(&coarse_v, 2.0 * h);
    fine + (fine - coarse) / 15.0
}

/// Cloud transform straight from its double-integral definition,
/// ∫₀¹ r′ J₀(k̄r′) ∫ √(1 − r′² − ȳ′²/ā²) Ai(ȳ′ + k̄²/ā² − ε) dȳ′ dr′,
/// with r′ = sin φ and ȳ′ = ā cos φ sin θ to remove the square roots.
fn nested_transform(a_bar: f64, eps: f64, k: f64, n: usize) -> f64 {
    let shift = k * k / (a_bar * a_bar) - eps;
    let inner = |c: f64| {
        common::richardson_simpson(
            |t: f64| a_bar * c * c * t.cos().powi(2) * airy_ai(a_bar * c * t.sin() + shift).unwrap(),
            -FRAC_PI_2,
            FRAC_PI_2,
            n,
        )
    };
    common::richardson_simpson(
        |phi: f64| {
            let (s, c) = phi.sin_cos();
            s * c * bessel_j0(k * s).unwrap() * inner(c)
        },
        0.0,
        FRAC_PI_2,
        n,
    )
}

/// The same transform after the radial integral is done in closed form,
/// evaluated on a fixed θ grid.
fn reduced_transform_grid(a_bar: f64, eps: f64, k: f64, n: usize) -> f64 {
    let shift = k * k / (a_bar * a_bar) - eps;
    let h = PI / n as f64;
    let v: Vec<f64> = (0..=n)
        .map(|i| {
            let t = -FRAC_PI_2 + i as f64 * h;
            let c = t.cos().max(0.0);
            let z = k * c;
            let j1oz = if z < 1e-3 { 1.0 / 3.0 - z * z / 30.0 } else { (z.sin() - z * z.cos()) / z.powi(3) };
            a_bar * c.powi(4) * j1oz * airy_ai(a_bar * t.sin() + shift).unwrap()
        })
        .collect();
    richardson_samples(&v, h)
}

/// Brute-force I = ∫ k̄ J₀(k̄r̄) Ci(ȳ − ε + k̄²/ā²) G(k̄) dk̄ on fixed grids.
fn brute_force_i(d: &CondensateDerived, eps: f64, r_perp: f64, y: f64, nk: usize, nt: usize) -> (f64, f64) {
    let a_bar = d.a_bar();
    let r_bar = r_perp / d.tf_radius;
    let y_bar = y / d.l0;
    let k_max = a_bar * (a_bar + eps.max(0.0) + 40.0).sqrt();
    let h = k_max / nk as f64;
    let mut re = Vec::with_capacity(nk + 1);
    let mut im = Vec::with_capacity(nk + 1);
    for i in 0..=nk {
        let k = i as f64 * h;
        let g = reduced_transform_grid(a_bar, eps, k, nt);
        let x = y_bar - eps + k * k / (a_bar * a_bar);
        let w = k * bessel_j0(k * r_bar).unwrap() * g;
        re.push(w * airy_bi(x).unwrap());
        im.push(w * airy_ai(x).unwrap());
    }
    (richardson_samples(&re, h), richardson_samples(&im, h))
}

#[test]
fn thomas_fermi_profile_is_normalised() {
    let d = reference();
    let a = d.tf_radius;
    // lengths in units of a; the cylinder overhangs the sphere
    let r = integrate_cylindrical_volume(
        |r, y| tf_profile(&d, r * a, y * a).powi(2) * a.powi(3),
        1.2,
        -1.2,
        1.2,
        &QuadratureSpec::new(1e-9, 1e-15, 400).unwrap(),
    );
    assert!((r.value - 1.0).abs() < 1e-6, "{r:?}");
}

#[test]
fn closed_form_radial_reduction_matches_nested_definition() {
    let d = reference();
    let a_bar = d.a_bar();
    for eps in [-5.0, 0.0, 7.5] {
        let k = SpectralKernel::new(&d, eps * d.energy_unit / RB87.hbar, &QuadratureSpec::default()).unwrap();
        assert!((k.scaled_detuning() - eps).abs() < 1e-12);
        for kb in [0.0, 0.7, 3.0, 12.0, 40.0] {
            let lib = k.cloud_transform(kb).value;
            let oracle = nested_transform(a_bar, eps, kb, 600);
            let scale = oracle.abs().max(1e-3);
            assert!((lib - oracle).abs() < 1e-7 * scale, "eps {eps} k {kb}: {lib} vs {oracle}");
        }
    }
}

#[test]
fn regression_fixture_on_axis() {
    let k = shared_kernel();
    let p = k.resolution(0.0, -65e-6).unwrap();
    assert!(p.converged);
    assert!((p.d_bar - 0.370_078_625).abs() < 1e-8, "{}", p.d_bar);
}

#[test]
fn regression_fixture_against_brute_force() {
    let d = reference();
    let (re, im) = brute_force_i(&d, 0.0, 0.0, -65e-6, 16_000, 400);
    let brute = PI * PI * (re * re + im * im);
    assert!((brute - 0.370_078_625).abs() < 1e-6, "{brute}");
}

#[test]
fn deep_negative_detuning_is_forbidden() {
    let d = reference();
    let spec = QuadratureSpec::default();
    let y = -65e-6;
    let to_detuning = |eps: f64| eps * d.energy_unit / RB87.hbar;
    let mut peak: f64 = 0.0;
    for i in -12..=12 {
        let f = SpectralKernel::new(&d, to_detuning(2.0 * i as f64), &spec)
            .unwrap()
            .amplitude(0.0, y)
            .unwrap();
        peak = peak.max(f.value.norm());
    }
    let deep = SpectralKernel::new(&d, to_detuning(-50.0), &spec).unwrap().amplitude(0.0, y).unwrap();
    assert!(deep.value.norm() < 1e-3 * peak);

    // independent fixed-grid evaluation, ten times finer than needed to resolve Ci
    let (re, im) = brute_force_i(&d, -50.0, 0.0, y, 8_000, 200);
    let scale = PI / d.energy_unit * d.peak_density().sqrt();
    let brute = scale * re.hypot(im);
    assert!(brute < 1e-3 * peak, "{brute} vs {peak}");
    assert!((brute - deep.value.norm()).abs() < 1e-6 * peak);
}

#[test]
fn tighter_quadrature_stays_within_reported_error() {
    let d = reference();
    let coarse = SpectralKernel::new(&d, 0.0, &QuadratureSpec::new(1e-5, 1e-14, 200).unwrap()).unwrap();
    let fine = SpectralKernel::new(&d, 0.0, &QuadratureSpec::new(1e-9, 1e-14, 400).unwrap()).unwrap();
    for (r, y) in [(0.0, -40e-6), (2e-6, -65e-6), (6e-6, -90e-6)] {
        let c = coarse.resolution(r, y).unwrap();
        let f = fine.resolution(r, y).unwrap();
        assert!((c.d_value - f.d_value).abs() <= c.error, "{r} {y}: {} {} ± {}", c.d_value, f.d_value, c.error);
    }
}

#[test]
fn volume_detuning_profile_peaks_near_resonance() {
    let d = reference();
    let spec = QuadratureSpec::new(1e-4, 1e-14, 200).unwrap();
    let vol = DetectionVolume::reference_setup(d.tf_radius);
    let half_width = 0.5 * d.tf_radius / d.l0;
    let mut profile = Vec::new();
    for i in -8..=8 {
        let eps = 2.5 * i as f64;
        let k = SpectralKernel::new(&d, eps * d.energy_unit / RB87.hbar, &spec).unwrap();
        let v = mwsense::sensing::integrate_d_bar(&k, &vol, &spec).unwrap().value;
        assert!(v.is_finite() && v > 0.0, "eps {eps}: {v}");
        profile.push((eps, v));
    }
    let top = (0..profile.len()).max_by(|&i, &j| profile[i].1.total_cmp(&profile[j].1)).unwrap();
    assert!(profile[top].0.abs() <= half_width, "peak at {}", profile[top].0);
    // single hump: rising up to the peak, falling after it
    for w in profile[..=top].windows(2) {
        assert!(w[1].1 > w[0].1, "{w:?}");
    }
    for w in profile[top..].windows(2) {
        assert!(w[1].1 < w[0].1, "{w:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn resolution_is_nonnegative_and_axially_symmetric(r in 0.0..20e-6f64, y in -120e-6..-10e-6f64) {
        let k = shared_kernel();
        let p = k.resolution(r, y).unwrap();
        let m = k.resolution(-r, y).unwrap();
        prop_assert!(p.d_value >= 0.0 && p.d_bar >= 0.0);
        prop_assert_eq!(p.d_value, m.d_value);
        let rho = k.derived().peak_density();
        prop_assert!((p.d_bar * rho - p.d_value).abs() <= 1e-12 * p.d_value);
    }

    #[test]
    fn profile_vanishes_outside_and_is_bounded(r in 0.0..10e-6f64, y in -10e-6..10e-6f64) {
        let d = reference();
        let v = tf_profile(&d, r, y);
        let peak = d.peak_density().sqrt();
        prop_assert!(v >= 0.0 && v <= peak);
        if r.hypot(y) > d.tf_radius * (1.0 + 1e-12) {
            prop_assert_eq!(v, 0.0);
        }
    }
}
