//! Maximum-coupling selection as a linear program:
//! maximize `s` subject to `A c = s b` and `-1 <= c_i <= 1`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::linsolve::RCOND;

const ACTIVE: f64 = 1e-7;

pub(crate) fn max_coupling(a: &DMatrix<f64>, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let (m, n) = a.shape();
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let c: Vec<_> = (0..n).map(|_| problem.add_var(0.0, (-1.0, 1.0))).collect();
    let s = problem.add_var(1.0, (0.0, f64::INFINITY));
    for r in 0..m {
        let mut row: Vec<_> = (0..n).map(|i| (c[i], a[(r, i)])).collect();
        row.push((s, -b[r]));
        problem.add_constraint(&row, ComparisonOp::Eq, 0.0);
    }
    let sol = problem
        .solve()
        .map_err(|e| Error::NoSolution(format!("linear program: {e}")))?;
    let s_lp = sol[s];
    if !(s_lp > 1e-12) {
        return Err(Error::NoSolution(
            "pattern direction is not reachable from the control register".into(),
        ));
    }
    let c_lp: Vec<f64> = c.iter().map(|&v| sol[v]).collect();
    let (c_out, s_out) = polish(a, b, &c_lp, s_lp).unwrap_or((c_lp, s_lp));
    normalize(c_out, s_out)
}

/// Re-solve the vertex exactly: pin the saturated components at +-1 and solve
/// the remaining equalities for the free components and `s`.
fn polish(a: &DMatrix<f64>, b: &[f64], c: &[f64], s: f64) -> Option<(Vec<f64>, f64)> {
    let (m, n) = a.shape();
    let fixed: Vec<bool> = c.iter().map(|x| x.abs() >= 1.0 - ACTIVE).collect();
    let free: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
    let k = free.len() + 1;
    let mut sys = DMatrix::zeros(m, k);
    let mut rhs = DVector::zeros(m);
    for r in 0..m {
        for (col, &i) in free.iter().enumerate() {
            sys[(r, col)] = a[(r, i)];
        }
        sys[(r, k - 1)] = -b[r];
        rhs[r] = -(0..n)
            .filter(|&i| fixed[i])
            .map(|i| a[(r, i)] * c[i].signum())
            .sum::<f64>();
    }
    let svd = sys.clone().svd(true, true);
    let max = svd.singular_values.iter().fold(0.0f64, |acc, x| acc.max(*x));
    let rank = svd.singular_values.iter().filter(|x| **x > RCOND * max).count();
    if rank < k {
        return None;
    }
    let x = svd.solve(&rhs, RCOND * max).ok()?;
    let resid = (&sys * &x - &rhs).norm();
    let s_new = x[k - 1];
    if resid > 1e-10 * (1.0 + rhs.norm()) || (s_new - s).abs() > 1e-6 * s.max(1.0) {
        return None;
    }
    let mut out: Vec<f64> = c.iter().map(|x| x.signum()).collect();
    for (col, &i) in free.iter().enumerate() {
        if x[col].abs() > 1.0 + 1e-9 {
            return None;
        }
        out[i] = x[col];
    }
    Some((out, s_new))
}

fn normalize(c: Vec<f64>, s: f64) -> Result<(Vec<f64>, f64)> {
    let max = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(max > 0.0) {
        return Err(Error::NoSolution("linear program returned the zero vector".into()));
    }
    Ok((c.iter().map(|x| (x / max).clamp(-1.0, 1.0)).collect(), s / max))
}
