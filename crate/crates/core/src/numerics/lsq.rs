//! Levenberg-Marquardt nonlinear least squares for small parameter vectors.
//!
//! The Jacobian is taken by forward differences; the damped normal equations
//! are solved by Gaussian elimination, which is ample for the handful of
//! parameters fitted here (peaks, lineshapes).

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy)]
pub struct FitOptions<R> {
    pub max_iterations: usize,
    /// Relative step-size convergence threshold.
    pub step_tol: R,
    /// Relative cost-decrease convergence threshold.
    pub cost_tol: R,
}

impl<R: Real> Default for FitOptions<R> {
    fn default() -> Self {
        Self {
            max_iterations: 300,
            step_tol: R::lit(1e-13),
            cost_tol: R::lit(1e-14),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitOutcome<R> {
    pub params: Vec<R>,
    /// Euclidean norm of the final residual vector.
    pub residual_norm: R,
    pub iterations: usize,
}

fn cost<R: Real>(model: &impl Fn(R, &[R]) -> R, xs: &[R], ys: &[R], p: &[R]) -> R {
    let mut c = R::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let r = model(x, p) - y;
        c = c + r * r;
    }
    c
}

/// Solves `A x = b` in place by Gaussian elimination with partial pivoting.
fn solve<R: Real>(a: &mut [Vec<R>], b: &mut [R]) -> Option<Vec<R>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() < R::lit(1e-300) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] = a[row][k] - factor * a[col][k];
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    let mut x = vec![R::zero(); n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s = s - a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

/// Fits `model(x, params)` to `(xs, ys)` starting from `p0`.
pub fn levenberg_marquardt<R: Real>(
    model: impl Fn(R, &[R]) -> R,
    xs: &[R],
    ys: &[R],
    p0: &[R],
    opts: FitOptions<R>,
) -> Result<FitOutcome<R>> {
    if xs.len() != ys.len() || xs.len() < p0.len() {
        return Err(Error::InvalidInput(
            "fit needs at least as many samples as parameters".into(),
        ));
    }
    let n = p0.len();
    let mut p: Vec<R> = p0.to_vec();
    let mut lambda = R::lit(1e-3);
    let mut c = cost(&model, xs, ys, &p);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        // Forward-difference Jacobian and residuals.
        let mut jtj = vec![vec![R::zero(); n]; n];
        let mut jtr = vec![R::zero(); n];
        let mut jac_row = vec![R::zero(); n];
        let mut ptmp = p.clone();
        for (&x, &y) in xs.iter().zip(ys) {
            let f0 = model(x, &p);
            for j in 0..n {
                let h = (p[j].abs() * R::lit(1e-7)).max(R::lit(1e-10));
                ptmp[j] = p[j] + h;
                jac_row[j] = (model(x, &ptmp) - f0) / h;
                ptmp[j] = p[j];
            }
            let r = f0 - y;
            for j in 0..n {
                jtr[j] = jtr[j] + jac_row[j] * r;
                for k in 0..n {
                    jtj[j][k] = jtj[j][k] + jac_row[j] * jac_row[k];
                }
            }
        }

        let mut accepted = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for (j, row) in a.iter_mut().enumerate() {
                row[j] = row[j] + lambda * jtj[j][j].max(R::lit(1e-30));
            }
            let mut rhs: Vec<R> = jtr.iter().map(|&v| -v).collect();
            let Some(step) = solve(&mut a, &mut rhs) else {
                lambda = lambda * R::lit(10.0);
                continue;
            };
            let trial: Vec<R> = p.iter().zip(&step).map(|(&pi, &si)| pi + si).collect();
            let ct = cost(&model, xs, ys, &trial);
            if ct.is_finite() && ct <= c {
                let step_rel = step
                    .iter()
                    .zip(&p)
                    .map(|(&s, &pi)| s.abs() / pi.abs().max(R::one()))
                    .fold(R::zero(), R::max);
                let cost_rel = (c - ct) / c.max(R::lit(1e-300));
                p = trial;
                c = ct;
                lambda = (lambda * R::lit(0.33)).max(R::lit(1e-14));
                accepted = true;
                if step_rel < opts.step_tol || cost_rel < opts.cost_tol {
                    converged = true;
                }
                break;
            }
            lambda = lambda * R::lit(7.0);
        }
        if converged || (!accepted && lambda > R::lit(1e12)) {
            converged = converged || !accepted;
            break;
        }
    }

    let residual_norm = c.sqrt();
    if !converged && iterations >= opts.max_iterations {
        return Err(Error::FitNoConvergence {
            residual: residual_norm.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(FitOutcome {
        params: p,
        residual_norm,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(x: f64, p: &[f64]) -> f64 {
        p[0] + p[1] * (-2.0 * (x - p[2]) * (x - p[2]) / (p[3] * p[3])).exp()
    }

    #[test]
    fn noiseless_gaussian_recovered_to_machine_precision() {
        let truth = [0.1, 2.0, 0.3, 0.8];
        let xs: Vec<f64> = (0..200).map(|i| -2.0 + 0.02 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| gauss(x, &truth)).collect();
        let out =
            levenberg_marquardt(gauss, &xs, &ys, &[0.0, 1.5, 0.1, 1.2], FitOptions::default())
                .unwrap();
        for (got, want) in out.params.iter().zip(&truth) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn starved_iterations_report_nonconvergence() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| gauss(x, &[0.0, 1.0, 2.5, 0.4])).collect();
        let opts = FitOptions {
            max_iterations: 1,
            step_tol: 1e-16,
            cost_tol: 1e-16,
        };
        let r = levenberg_marquardt(gauss, &xs, &ys, &[5.0, -3.0, -4.0, 9.0], opts);
        assert!(matches!(r, Err(Error::FitNoConvergence { .. })));
    }
}
