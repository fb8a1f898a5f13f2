use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Nodes and weights for averaging over a standard normal variable:
/// `E[g(z)] ~ sum_k w_k g(sqrt(2) x_k)`. Weights sum to one.
///
/// Golub-Welsch on the Hermite recurrence.
pub fn gauss_hermite(points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if points == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one point".into()));
    }
    if points > 200 {
        return Err(Error::InvalidArgument(format!("{points} quadrature points is too many")));
    }
    let mut j = DMatrix::<f64>::zeros(points, points);
    for k in 1..points {
        let b = (k as f64 / 2.0).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..points)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Symmetrize against round-off.
    for k in 0..points / 2 {
        let (a, b) = (pairs[k], pairs[points - 1 - k]);
        let x = 0.5 * (b.0 - a.0);
        let w = 0.5 * (a.1 + b.1);
        pairs[k] = (-x, w);
        pairs[points - 1 - k] = (x, w);
    }
    if points % 2 == 1 {
        pairs[points / 2].0 = 0.0;
    }
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    Ok((pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1 / total).collect()))
}

/// Order-fixed pairwise summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
