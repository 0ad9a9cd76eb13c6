//! Characteristic-function inversion by the Gil-Pelaez formula.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{adaptive, Quadrature, Tolerance, DEFAULT_INTERVAL_LIMIT};
use crate::error::{Error, Result};

/// Default absolute tolerance on the inverted probability.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

const MAX_DOUBLINGS: usize = 48;
const MAX_PANELS: usize = 4096;

/// `F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-j w x} cf(w)) / w dw`, clamped to
/// `[0, 1]`.
///
/// The integral runs over `[0, trunc]` first, then over successive octaves
/// `[T, 2T]` until two consecutive octaves each contribute less than
/// `rel_tol` (in probability units).
pub fn cf_to_cdf<F>(cf: F, x: f64, trunc: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    if !(trunc > 0.0) || !trunc.is_finite() {
        return Err(Error::domain(format!("truncation point must be positive, got {trunc}")));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {rel_tol}")));
    }
    let integrand = |w: f64| {
        if w == 0.0 {
            return 0.0;
        }
        let v = Complex64::new(0.0, -w * x).exp() * cf(w);
        v.im / w
    };
    // tolerance in integral units; the integral is divided by pi
    let tol = Tolerance::new(0.05 * rel_tol * PI, 1e-10);
    let head = oscillatory(&integrand, 0.0, trunc, x, tol);
    if !head.converged {
        return Err(Error::NonConvergence {
            what: "characteristic-function inversion",
            estimate: 0.5 - head.value / PI,
            error: head.error / PI,
        });
    }
    let mut total = head.value;
    let mut lo = trunc;
    let mut quiet = 0;
    for _ in 0..MAX_DOUBLINGS {
        let part = oscillatory(&integrand, lo, 2.0 * lo, x, tol);
        total += part.value;
        lo *= 2.0;
        if (part.value / PI).abs() < rel_tol && part.converged {
            quiet += 1;
            if quiet == 2 {
                return Ok((0.5 - total / PI).clamp(0.0, 1.0));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "characteristic-function inversion tail",
        estimate: (0.5 - total / PI).clamp(0.0, 1.0),
        error: f64::NAN,
    })
}

/// Integrates over `[a, b]` in panels spanning a few periods of `e^{-j w x}`.
fn oscillatory<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, x: f64, tol: Tolerance) -> Quadrature<f64> {
    let periods = (b - a) * x.abs() / (2.0 * PI);
    let panels = ((periods / 4.0).ceil() as usize).clamp(1, MAX_PANELS);
    let width = (b - a) / panels as f64;
    let share = Tolerance::new(tol.abs / panels as f64, tol.rel);
    let mut sum = Quadrature { value: 0.0, error: 0.0, intervals: 0, converged: true };
    for i in 0..panels {
        let lo = a + i as f64 * width;
        let hi = if i + 1 == panels { b } else { lo + width };
        let part = adaptive(f, lo, hi, share, DEFAULT_INTERVAL_LIMIT);
        sum.value += part.value;
        sum.error += part.error;
        sum.intervals += part.intervals;
        sum.converged &= part.converged;
    }
    sum
}
