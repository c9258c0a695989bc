//! Adaptive Simpson quadrature with caller-supplied breakpoints.

use crate::error::{Error, Result};

/// Absolute tolerance used for every speed integral in the crate.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Maximum bisection depth before a subinterval is declared unconverged.
pub const MAX_DEPTH: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the Richardson error estimates `|S₂ − S₁|/15` over accepted panels.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

struct State<'f, F> {
    f: &'f F,
    evaluations: usize,
    error_estimate: f64,
    converged: bool,
}

impl<F: Fn(f64) -> f64> State<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    fn recurse(&mut self, panel: Panel, tol: f64, depth: usize) -> f64 {
        let Panel { a, b, fa, fm, fb, whole } = panel;
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (self.eval(lm), self.eval(rm));
        let h = b - a;
        let left = h * (fa + 4.0 * flm + fm) / 12.0;
        let right = h * (fm + 4.0 * frm + fb) / 12.0;
        let delta = left + right - whole;

        if delta.abs() <= 15.0 * tol {
            self.error_estimate += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        if depth == 0 {
            self.converged = false;
            self.error_estimate += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        let l = Panel { a, b: m, fa, fm: flm, fb: fm, whole: left };
        let r = Panel { a: m, b, fa: fm, fm: frm, fb, whole: right };
        self.recurse(l, 0.5 * tol, depth - 1) + self.recurse(r, 0.5 * tol, depth - 1)
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    integrate_piecewise(f, a, b, &[], tol)
}

/// Integrates `f` over `[a, b]`, forcing panel boundaries at every breakpoint
/// strictly inside the interval. The tolerance is shared between pieces in
/// proportion to their widths.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut nodes = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    nodes.extend(inner);
    nodes.push(hi);

    let mut state = State {
        f: &f,
        evaluations: 0,
        error_estimate: 0.0,
        converged: true,
    };
    let width = hi - lo;
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let xm = 0.5 * (x0 + x1);
        let (fa, fm, fb) = (state.eval(x0), state.eval(xm), state.eval(x1));
        let whole = (x1 - x0) * (fa + 4.0 * fm + fb) / 6.0;
        let piece_tol = tol * (x1 - x0) / width;
        let panel = Panel { a: x0, b: x1, fa, fm, fb, whole };
        total += state.recurse(panel, piece_tol, MAX_DEPTH);
    }

    if !state.converged || !total.is_finite() {
        return Err(Error::QuadratureNoConvergence {
            partial: sign * total,
            error_estimate: state.error_estimate,
            max_depth: MAX_DEPTH,
        });
    }
    Ok(Integral {
        value: sign * total,
        error_estimate: state.error_estimate,
        evaluations: state.evaluations,
    })
}
