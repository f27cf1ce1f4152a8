//! Adaptive Simpson quadrature with a global relative-error budget.

use crate::error::{Error, Result};
use crate::real::Real;

/// Integral value with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<R> {
    pub value: R,
    pub error_estimate: R,
    pub evaluations: usize,
}

struct Worker<'a, R: Real, F: Fn(R) -> R> {
    f: &'a F,
    evaluations: usize,
    error_sum: R,
    max_depth: usize,
}

impl<R: Real, F: Fn(R) -> R> Worker<'_, R, F> {
    fn eval(&mut self, x: R) -> R {
        self.evaluations += 1;
        (self.f)(x)
    }

    // Standard adaptive Simpson: a panel is accepted when the Richardson
    // error estimate |S2 - S1|/15 fits the local tolerance.
    #[allow(clippy::too_many_arguments)]
    fn simpson(&mut self, a: R, b: R, fa: R, fm: R, fb: R, whole: R, tol: R, depth: usize) -> R {
        let half = R::lit(0.5);
        let sixth = (b - a) / R::lit(6.0);
        let m = (a + b) * half;
        let lm = (a + m) * half;
        let rm = (m + b) * half;
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = sixth * half * (fa + R::lit(4.0) * flm + fm);
        let right = sixth * half * (fm + R::lit(4.0) * frm + fb);
        let delta = left + right - whole;
        let err = delta.abs() / R::lit(15.0);
        if depth >= self.max_depth || err <= tol {
            self.error_sum = self.error_sum + err;
            return left + right + delta / R::lit(15.0);
        }
        let l = self.simpson(a, m, fa, flm, fm, left, tol * half, depth + 1);
        let r = self.simpson(m, b, fm, frm, fb, right, tol * half, depth + 1);
        l + r
    }
}

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol`.
///
/// Reports [`Error::QuadratureNoConvergence`] with the achieved error bound
/// when subdivision bottoms out before the budget is met.
pub fn integrate<R: Real>(f: impl Fn(R) -> R, a: R, b: R, rel_tol: R) -> Result<Quadrature<R>> {
    if a == b {
        return Ok(Quadrature {
            value: R::zero(),
            error_estimate: R::zero(),
            evaluations: 0,
        });
    }
    let mut w = Worker {
        f: &f,
        evaluations: 0,
        error_sum: R::zero(),
        max_depth: 52,
    };
    let fa = w.eval(a);
    let m = (a + b) * R::lit(0.5);
    let fm = w.eval(m);
    let fb = w.eval(b);
    let whole = (b - a) / R::lit(6.0) * (fa + R::lit(4.0) * fm + fb);
    // Absolute budget from a first coarse estimate; floored to avoid a zero
    // budget when the integral happens to vanish.
    let scale = whole.abs().max(R::lit(1e-300));
    let tol = rel_tol * scale;
    let value = w.simpson(a, b, fa, fm, fb, whole, tol, 0);
    let achieved = w.error_sum;
    let bound = rel_tol * value.abs().max(scale) * R::lit(4.0);
    if !value.is_finite() || achieved > bound + R::lit(1e-300) {
        return Err(Error::QuadratureNoConvergence {
            achieved: achieved.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Quadrature {
        value,
        error_estimate: achieved,
        evaluations: w.evaluations,
    })
}

/// Nested 2-D integral of `f(x, y)` over `[ax, bx] x [ay, by]`.
pub fn integrate_2d<R: Real>(
    f: impl Fn(R, R) -> R,
    ax: R,
    bx: R,
    ay: R,
    by: R,
    rel_tol: R,
) -> Result<Quadrature<R>> {
    let inner_tol = rel_tol * R::lit(0.3);
    let mut evals = 0usize;
    let mut failed = None;
    let outer = integrate(
        |y| match integrate(|x| f(x, y), ax, bx, inner_tol) {
            Ok(q) => {
                evals += q.evaluations;
                q.value
            }
            Err(e) => {
                failed = Some(e);
                R::nan()
            }
        },
        ay,
        by,
        rel_tol,
    );
    match (outer, failed) {
        (_, Some(e)) => Err(e),
        (Err(e), None) => Err(e),
        (Ok(q), None) => Ok(Quadrature {
            value: q.value,
            error_estimate: q.error_estimate,
            evaluations: q.evaluations + evals,
        }),
    }
}
