//! Acceptance run against the published reference values. Prints one line
//! per criterion and fails only if the set of failing criteria differs from
//! `KNOWN_RED`.

mod common;

use mwsense::condensate::{derive, tf_profile, CondensateDerived, CondensateParams, SpectralKernel};
use mwsense::cpw::{
    b_max_cqed, b_max_single_photon, effective_permittivity, field_air_side,
    make_mode, single_photon_voltage, CpwGeometry, CpwMode, CpwPoint,
};
use mwsense::quadrature::{integrate_1d, integrate_cylindrical_volume, QuadratureSpec};
use mwsense::sensing::{
    atom_rate_for_field, monochromaticity_check, rate_from_density, rate_prefactor, DetectionVolume,
};
use mwsense::special::{airy_ai, airy_all, airy_bi, ellipk};
use mwsense::RB87;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

/// Criteria that miss their pinned tolerance with the model as specified.
/// 2: the exact speed of light gives L = 8.7725 mm; 8.778 mm needs c = 3e8 m/s.
/// 6: with B_x = 2.56 nT unattenuated the pipeline yields 𝒩 ≈ 14.
const KNOWN_RED: &[u32] = &[2, 6];

const OMEGA: f64 = 2.0 * PI * 6.8354e9;
const Q: f64 = 1.72e6;
const FAST: Duration = Duration::from_millis(1);

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn reference() -> (CpwGeometry, CpwMode, CondensateDerived) {
    let g = CpwGeometry::reference_setup();
    let m = make_mode(&g, OMEGA, Q, &RB87).unwrap();
    let d = derive(&CondensateParams::reference_setup(), &RB87).unwrap();
    (g, m, d)
}

fn criterion_1() -> Outcome {
    let (e, t) = timed(|| effective_permittivity(&CpwGeometry::reference_setup()).unwrap());
    Outcome {
        id: 1,
        name: "effective permittivity 6.25 ± 0.01",
        pass: (e - 6.25).abs() <= 0.01 && t < FAST,
        detail: format!("eps_eff = {e:.5} in {t:?}"),
    }
}

fn criterion_2() -> Outcome {
    let g = CpwGeometry::reference_setup();
    let (m, t) = timed(|| make_mode(&g, OMEGA, Q, &RB87).unwrap());
    let l_mm = m.length * 1e3;
    Outcome {
        id: 2,
        name: "resonator length 8.778 ± 0.005 mm",
        pass: (l_mm - 8.778).abs() <= 0.005 && t < FAST,
        detail: format!("L = {l_mm:.5} mm in {t:?}"),
    }
}

fn criterion_3() -> Outcome {
    let g = CpwGeometry::reference_setup();
    let (b, t) = timed(|| {
        let m = make_mode(&g, OMEGA, Q, &RB87).unwrap();
        b_max_cqed(&g, &m, &RB87).unwrap()
    });
    let nt = b * 1e9;
    Outcome {
        id: 3,
        name: "circuit-QED single-photon field 2.25 ± 0.05 nT",
        pass: (nt - 2.25).abs() <= 0.05 && t < FAST,
        detail: format!("|B_max^CQED| = {nt:.4} nT in {t:?}"),
    }
}

fn criterion_4() -> Outcome {
    let g = CpwGeometry::reference_setup();
    let ((b, c), t) = timed(|| {
        let m = make_mode(&g, OMEGA, Q, &RB87).unwrap();
        (b_max_single_photon(&g, &m, &RB87).unwrap(), b_max_cqed(&g, &m, &RB87).unwrap())
    });
    let agree = (b - c).abs() / b;
    Outcome {
        id: 4,
        name: "mode-volume field 2.56 ± 0.05 nT, routes within 15%",
        pass: (b * 1e9 - 2.56).abs() <= 0.05 && agree <= 0.15 && t < FAST,
        detail: format!("|B_max| = {:.4} nT, routes differ by {:.1}% in {t:?}", b * 1e9, 100.0 * agree),
    }
}

fn criterion_5() -> Outcome {
    let (d, t) = timed(|| derive(&CondensateParams::reference_setup(), &RB87).unwrap());
    let mu_hz = d.mu / RB87.hbar / (2.0 * PI);
    let w0_hz = d.omega0 / (2.0 * PI);
    let ok_mu = (mu_hz / 750.0 - 1.0).abs() <= 0.02;
    let ok_w0 = (w0_hz / 0.7e6 - 1.0).abs() <= 0.01;
    Outcome {
        id: 5,
        name: "chemical potential 2π×0.75 kHz ± 2%, Zeeman 2π×0.7 MHz ± 1%",
        pass: ok_mu && ok_w0 && t < FAST,
        detail: format!("mu/h = {mu_hz:.1} Hz, omega0/2π = {:.4} MHz in {t:?}", w0_hz / 1e6),
    }
}

fn criterion_6() -> Outcome {
    let (g, m, d) = reference();
    let spec = QuadratureSpec::default();
    let vol = DetectionVolume::reference_setup(d.tf_radius);
    let ((lit, att), t) = timed(|| {
        let k = SpectralKernel::new(&d, 0.0, &spec.tightened(0.1)).unwrap();
        let lit = atom_rate_for_field(&k, 2.56e-9, &vol, &spec).unwrap();
        let b_att = (-PI * 5e-6 / g.half_width()).exp() * b_max_single_photon(&g, &m, &RB87).unwrap();
        (lit, atom_rate_for_field(&k, b_att, &vol, &spec).unwrap())
    });
    let n = lit.atom_rate;
    Outcome {
        id: 6,
        name: "headline atom count 3 within a factor of 2",
        pass: (1.5..=6.0).contains(&n) && lit.d_bar_integral.converged && t < Duration::from_secs(600),
        detail: format!(
            "N = {n:.3} ± {:.1e} at B_x = 2.56 nT (lateral radius 3a); {:.3} with e^(-pi d/b) attenuation; {t:?}",
            lit.quadrature_error, att.atom_rate
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);

    let k_ok = (0..200).all(|_| {
        let k: f64 = rng.gen_range(0.0..0.999);
        let oracle = common::ellipk_agm_oracle(k);
        (ellipk(k).unwrap() - oracle).abs() <= 1e-12 * oracle
    });
    check("ellipk vs AGM", k_ok);

    let airy_ok = (0..=40).all(|i| {
        let x = -10.0 + 0.5 * i as f64;
        let (ai, bi) = common::airy_series_oracle(x);
        (airy_ai(x).unwrap() - ai).abs() <= 1e-10 && (airy_bi(x).unwrap() - bi).abs() <= 1e-10 * bi.abs().max(1.0)
    });
    check("Airy vs series oracle", airy_ok);

    let wronskian_ok = (0..=300).all(|i| {
        let v = airy_all(-25.0 + 0.1 * i as f64).unwrap();
        (v.ai * v.bip - v.aip * v.bi - 1.0 / PI).abs() <= 1e-10
    });
    check("Airy Wronskian", wronskian_ok);

    let (g, m, d) = reference();
    let a = d.tf_radius;
    let norm = integrate_cylindrical_volume(
        |r, y| tf_profile(&d, r * a, y * a).powi(2) * a.powi(3),
        1.2,
        -1.2,
        1.2,
        &QuadratureSpec::new(1e-9, 1e-15, 400).unwrap(),
    );
    check("Thomas-Fermi normalisation", (norm.value - 1.0).abs() <= 1e-6);

    let v0 = single_photon_voltage(&g, &m, &RB87).unwrap();
    let bc_ok = (0..50).all(|_| {
        let y = -rng.gen_range(0.5e-6..60e-6);
        let z = rng.gen_range(0.0..m.length);
        let x = rng.gen_range(0.0..g.half_width());
        let at = |x, z| field_air_side(&g, &m, CpwPoint::new(x, y, z), v0, &RB87).unwrap();
        let (w0, wb) = (at(0.0, z), at(g.half_width(), z));
        let (e0, el) = (at(x, 0.0), at(x, m.length));
        w0.by.norm() == 0.0
            && wb.by.norm() == 0.0
            && w0.bz.norm() == 0.0
            && e0.bx.norm() == 0.0
            && e0.by.norm() == 0.0
            && el.bx.norm() == 0.0
            && el.by.norm() == 0.0
            && at(x, m.length / 2.0).bz.norm() == 0.0
    });
    check("field boundary conditions", bc_ok);

    let id_ok = [1e-10, 2.56e-9, 1e-7].iter().all(|&b| {
        let p = rate_prefactor(&d, b);
        (p - rate_from_density(&d, b, 1.0)).abs() <= 1e-10 * p
    });
    let kernel = SpectralKernel::new(&d, 0.0, &QuadratureSpec::default()).unwrap();
    let pt = kernel.resolution(1e-6, -60e-6).unwrap();
    check(
        "rate identity and D/D-bar",
        id_ok && (pt.d_bar * d.peak_density() - pt.d_value).abs() <= 1e-10 * pt.d_value,
    );

    let lin_ok = (0..20).all(|_| {
        let (al, be, w): (f64, f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.5..5.0));
        let s = QuadratureSpec::new(1e-12, 1e-15, 200).unwrap();
        let f = |x: f64| (w * x).sin();
        let h = |x: f64| (-x * x).exp();
        let lhs = integrate_1d(|x| al * f(x) + be * h(x), -1.0, 2.0, &s).value;
        let rhs = al * integrate_1d(f, -1.0, 2.0, &s).value + be * integrate_1d(h, -1.0, 2.0, &s).value;
        (lhs - rhs).abs() <= 1e-11 * (1.0 + al.abs() + be.abs())
    });
    let f = |x: f64| (x * x).cos() * (-0.1 * x).exp();
    let reference = integrate_1d(f, 0.0, 10.0, &QuadratureSpec::new(1e-14, 1e-15, 500).unwrap()).value;
    let mut last_evals = 0;
    let mono_ok = (2..=12).all(|k| {
        let tol = 10f64.powi(-k);
        let r = integrate_1d(f, 0.0, 10.0, &QuadratureSpec::new(tol, 1e-15, 500).unwrap());
        let ok = r.evaluations >= last_evals && (r.value - reference).abs() <= tol * reference.abs() + 1e-14;
        last_evals = r.evaluations;
        ok
    });
    check("quadrature linearity", lin_ok);
    check("quadrature convergence monotone", mono_ok);

    let spec = QuadratureSpec::default();
    let vol = DetectionVolume::reference_setup(a);
    let rate = |k: &SpectralKernel, b: f64| atom_rate_for_field(k, b, &vol, &spec).unwrap().atom_rate;
    let n1 = rate(&kernel, 1e-9);
    check("rate ∝ B_x²", (rate(&kernel, 2e-9) / n1 - 4.0).abs() <= 1e-9);

    let cloud = |n0: f64| {
        let p = CondensateParams { atom_number: n0, tf_radius: Some(a), trap_freqs: None, ..CondensateParams::reference_setup() };
        derive(&p, &RB87).unwrap()
    };
    let k_half = SpectralKernel::new(&cloud(1e4), 0.0, &spec).unwrap();
    let k_full = SpectralKernel::new(&cloud(2e4), 0.0, &spec).unwrap();
    check("rate ∝ N0 at fixed radius", (rate(&k_full, 1e-9) / rate(&k_half, 1e-9) - 2.0).abs() <= 1e-6);

    let at_depth = |dist: f64| {
        let b = field_air_side(&g, &m, CpwPoint::new(0.0, -dist, m.length / 2.0), v0, &RB87).unwrap();
        rate(&kernel, b.peak_magnitude())
    };
    let ratio = at_depth(50e-6) / at_depth(30e-6);
    let expected = (-2.0 * PI * 20e-6 / g.half_width()).exp();
    check("far-field decay e^(-2 pi d/b)", (ratio / expected - 1.0).abs() <= 0.05);

    Outcome {
        id: 7,
        name: "property suite",
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            "all 12 properties hold".into()
        } else {
            format!("failed: {}", failures.join(", "))
        },
    }
}

fn criterion_8() -> Outcome {
    let (_, m, d) = reference();
    let c = monochromaticity_check(&d, &m);
    Outcome {
        id: 8,
        name: "bandwidth/linewidth ratio in [3, 10]",
        pass: (3.0..=10.0).contains(&c.ratio),
        detail: format!(
            "2Mga/ħ = 2π×{:.2} kHz, ω/Q = 2π×{:.2} kHz, ratio {:.2}",
            c.bandwidth / (2.0 * PI) / 1e3,
            c.linewidth / (2.0 * PI) / 1e3,
            c.ratio
        ),
    }
}

fn main() {
    let runners: [fn() -> Outcome; 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let mut red = Vec::new();
    for run in runners {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {tag}  {}: {}", o.id, o.name, o.detail);
        if !o.pass {
            red.push(o.id);
        }
    }
    let unexpected: Vec<_> = red.iter().filter(|i| !KNOWN_RED.contains(i)).collect();
    let fixed: Vec<_> = KNOWN_RED.iter().filter(|i| !red.contains(i)).collect();
    println!(
        "acceptance: {} of 8 pass; known shortfalls {:?}",
        8 - red.len(),
        KNOWN_RED
    );
    if !unexpected.is_empty() || !fixed.is_empty() {
        println!("acceptance: unexpected failures {unexpected:?}, unexpectedly passing {fixed:?}");
        std::process::exit(1);
    }
}
