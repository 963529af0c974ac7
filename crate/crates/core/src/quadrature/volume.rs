use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use super::{integrate_1d, integrate_1d_par, IntegralResult, QuadValue, QuadratureSpec, WithError};

/// ∫_{y_min}^{y_max} dy ∫_0^{r_max} 2π r g(r, y) dr for an azimuthally
/// symmetric field g.
///
/// The outer (y) integral runs its panel nodes concurrently; each node does
/// an inner radial integral at ten-fold tighter tolerance. The inner error
/// estimates are integrated along with the values and added to the outer
/// error, and any inner non-convergence clears `converged`.
pub fn integrate_cylindrical_volume<T: QuadValue>(
    g: impl Fn(f64, f64) -> T + Sync,
    r_max: f64,
    y_min: f64,
    y_max: f64,
    spec: &QuadratureSpec,
) -> IntegralResult<T> {
    let inner_spec = spec.tightened(0.1);
    let evaluations = AtomicUsize::new(0);
    let inner_failed = AtomicBool::new(false);
    let outer = integrate_1d_par(
        |y| {
            let inner = integrate_1d(|r| g(r, y) * (2.0 * PI * r), 0.0, r_max, &inner_spec);
            evaluations.fetch_add(inner.evaluations, Ordering::Relaxed);
            if !inner.converged {
                inner_failed.store(true, Ordering::Relaxed);
            }
            WithError::new(inner.value, inner.error_estimate)
        },
        y_min,
        y_max,
        spec,
    );
    IntegralResult {
        value: outer.value.value,
        error_estimate: outer.error_estimate + outer.value.error.abs(),
        evaluations: evaluations.into_inner(),
        converged: outer.converged && !inner_failed.into_inner(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_volume() {
        let spec = QuadratureSpec::new(1e-12, 1e-14, 100).unwrap();
        let r = integrate_cylindrical_volume(|_r, _y| 1.0, 1.0, 0.0, 1.0, &spec);
        assert!((r.value - PI).abs() < 1e-10);
        assert!(r.converged);
    }
}
