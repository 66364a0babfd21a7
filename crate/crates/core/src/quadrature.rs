//! Adaptive Simpson quadrature with Richardson correction.

use crate::error::{Error, Result};

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const MAX_DEPTH: u32 = 48;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        Self { a, b, fa, fm, fb, whole }
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// Fails when some panel reaches the recursion limit without meeting its
/// share of the tolerance.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Numerical(format!("bad integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let mut acc = Integral { value: 0.0, error_estimate: 0.0, evaluations: 3 };
    // Explicit stack keeps deep recursion off the call stack.
    let mut stack = vec![(Panel::new(a, b, fa, fm, fb), abs_tol, 0u32)];
    while let Some((panel, tol, depth)) = stack.pop() {
        let m = 0.5 * (panel.a + panel.b);
        let lm = 0.5 * (panel.a + m);
        let rm = 0.5 * (m + panel.b);
        let flm = f(lm);
        let frm = f(rm);
        acc.evaluations += 2;
        let left = Panel::new(panel.a, m, panel.fa, flm, panel.fm);
        let right = Panel::new(m, panel.b, panel.fm, frm, panel.fb);
        let refined = left.whole + right.whole;
        let delta = refined - panel.whole;
        if !refined.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite integrand on [{}, {}]",
                panel.a, panel.b
            )));
        }
        if delta.abs() <= 15.0 * tol {
            acc.value += refined + delta / 15.0;
            acc.error_estimate += delta.abs() / 15.0;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Numerical(format!(
                "adaptive Simpson did not converge on [{:e}, {:e}] after {} evaluations (panel error {:e}, tolerance {:e})",
                panel.a, panel.b, acc.evaluations, delta.abs() / 15.0, tol
            )));
        }
        stack.push((right, 0.5 * tol, depth + 1));
        stack.push((left, 0.5 * tol, depth + 1));
    }
    Ok(acc)
}
