use super::{integrate_1d, IntegralResult, QuadValue, QuadratureSpec, TailStrategy};
use crate::error::{Error, Result};

/// Panels compared when testing whether the tail is shrinking at all.
const DECAY_WINDOW: usize = 16;

/// ∫₀^∞ f(x) dx.
///
/// With [`TailStrategy::SuccessiveIntervals`] the panels [nΛ, (n+1)Λ] are
/// integrated adaptively and summed until two consecutive panels each
/// contribute less than a tenth of the current target accuracy. The two
/// final panel magnitudes are added to the error estimate as the truncation
/// error. A tail whose panel contributions stop shrinking, or that needs
/// more than `spec.max_subdivisions` panels, is an error.
pub fn integrate_semi_infinite<T: QuadValue>(
    f: impl Fn(f64) -> T,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<T>> {
    spec.validate()?;
    let panel_width = match spec.tail {
        TailStrategy::FixedUpperLimit { upper } => return Ok(integrate_1d(&f, 0.0, upper, spec)),
        TailStrategy::SuccessiveIntervals { panel_width } => panel_width,
    };

    let mut total = T::zero();
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    let mut magnitudes: Vec<f64> = Vec::new();
    let mut quiet_run = 0;
    let mut n = 0usize;
    loop {
        let a = n as f64 * panel_width;
        let b = a + panel_width;
        let target = spec.target(total.magnitude());
        let panel_spec = QuadratureSpec {
            abs_tol: 0.1 * target,
            ..*spec
        };
        let panel = integrate_1d(&f, a, b, &panel_spec);
        evaluations += panel.evaluations;
        converged &= panel.converged;
        total = total + panel.value;
        error += panel.error_estimate;
        let mag = panel.value.magnitude();
        magnitudes.push(mag);
        n += 1;

        if mag < 0.1 * spec.target(total.magnitude()) {
            quiet_run += 1;
        } else {
            quiet_run = 0;
        }
        if quiet_run >= 2 {
            error += magnitudes[n - 2..].iter().sum::<f64>();
            break;
        }
        if n >= spec.max_subdivisions || !tail_shrinking(&magnitudes) {
            return Err(Error::NonDecayingTail {
                panels: n,
                last: mag,
            });
        }
    }
    Ok(IntegralResult {
        value: total,
        error_estimate: error,
        evaluations,
        converged: converged && error <= spec.target(total.magnitude()),
    })
}

/// False once the latest window of panels is, on average, no smaller than
/// the window before it (after enough panels to judge).
fn tail_shrinking(magnitudes: &[f64]) -> bool {
    let n = magnitudes.len();
    if n < 4 * DECAY_WINDOW {
        return true;
    }
    let recent: f64 = magnitudes[n - DECAY_WINDOW..].iter().sum();
    let earlier: f64 = magnitudes[n - 2 * DECAY_WINDOW..n - DECAY_WINDOW].iter().sum();
    recent < earlier
}
