//! Bracketed scalar minimization: coarse grid scan, then golden-section
//! refinement of the bracketing interval.

use crate::error::{Error, Result};
use crate::real::Real;

/// Minimizer location and value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<R> {
    pub x: R,
    pub value: R,
}

/// Golden-section search on `[a, b]`, assumed to bracket a single minimum.
pub fn golden_section<R: Real>(
    f: impl Fn(R) -> R,
    mut a: R,
    mut b: R,
    x_tol: R,
    max_iter: usize,
) -> Minimum<R> {
    let inv_phi = R::lit(2.0) / (R::one() + R::lit(5.0).sqrt());
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= x_tol {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        Minimum { x: x1, value: f1 }
    } else {
        Minimum { x: x2, value: f2 }
    }
}

/// Locates the minimizer of `f` on `[a, b]` to within `x_tol`.
///
/// An `n_grid`-point scan picks the bracketing interval; golden-section
/// search refines it. Fails with [`Error::NoBracket`] when the grid minimum
/// sits on an endpoint, i.e. the function is monotone on the interval.
pub fn minimize_grid_golden<R: Real>(
    f: impl Fn(R) -> R,
    a: R,
    b: R,
    n_grid: usize,
    x_tol: R,
) -> Result<Minimum<R>> {
    if !(b > a) || n_grid < 3 {
        return Err(Error::InvalidInput(
            "minimization interval must be non-degenerate with at least 3 grid points".into(),
        ));
    }
    let n = n_grid - 1;
    let step = (b - a) / R::from_usize(n).unwrap();
    let mut best_i = 0usize;
    let mut best_v = R::infinity();
    for i in 0..=n {
        let x = a + step * R::from_usize(i).unwrap();
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    if best_i == 0 || best_i == n {
        return Err(Error::NoBracket);
    }
    let lo = a + step * R::from_usize(best_i - 1).unwrap();
    let hi = a + step * R::from_usize(best_i + 1).unwrap();
    Ok(golden_section(f, lo, hi, x_tol, 200))
}
