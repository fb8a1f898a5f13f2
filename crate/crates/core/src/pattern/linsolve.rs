use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value cutoff used for rank decisions and pseudoinverses.
pub(crate) const RCOND: f64 = 1e-12;

pub(crate) fn rank(a: &DMatrix<f64>) -> usize {
    let sv = a.singular_values();
    let max = sv.iter().fold(0.0f64, |m, x| m.max(*x));
    sv.iter().filter(|s| **s > RCOND * max).count()
}

/// Exact solve for square nonsingular systems, otherwise the minimum-norm
/// (least-squares) solution from the truncated pseudoinverse.
pub(crate) fn min_norm(a: &DMatrix<f64>, b: &DVector<f64>, allow_least_squares: bool) -> Result<DVector<f64>> {
    if a.nrows() == a.ncols() && rank(a) == a.nrows() {
        if let Some(x) = a.clone().lu().solve(b) {
            return Ok(x);
        }
    }
    let svd = a.clone().svd(true, true);
    let max = svd.singular_values.iter().fold(0.0f64, |m, x| m.max(*x));
    let pinv = svd
        .pseudo_inverse(RCOND * max)
        .map_err(|e| Error::NoSolution(e.to_string()))?;
    let x = pinv * b;
    if !allow_least_squares {
        let resid = (a * &x - b).norm();
        if resid > 1e-9 * (1.0 + b.norm()) {
            return Err(Error::NoSolution(format!(
                "rank-deficient system is inconsistent (residual {resid:.3e})"
            )));
        }
    }
    Ok(x)
}
