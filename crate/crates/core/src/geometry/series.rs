//! Truncated multivariate Taylor series of the coupling field.
//!
//! `|delta + h|^2 = s0 + u(h)` with `u` a quadratic polynomial without a
//! constant term, so `(s0 + u)^p` expands as a binomial series in `u / s0`
//! that terminates at the requested total degree.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::{Layout, Position};

/// Exponents of a monomial `h_1^b_1 ... h_D^b_D`.
pub type MultiIndex = Vec<u32>;

/// All multi-indices of total degree `<= order`, graded by degree.
pub(crate) fn multi_indices(dim: usize, order: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for degree in 0..=order as u32 {
        let mut current = vec![0u32; dim];
        push_degree(&mut out, &mut current, 0, degree);
    }
    out
}

fn push_degree(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, slot: usize, left: u32) {
    if slot + 1 == current.len() {
        current[slot] = left;
        out.push(current.clone());
        return;
    }
    for e in (0..=left).rev() {
        current[slot] = e;
        push_degree(out, current, slot + 1, left - e);
    }
    current[slot] = 0;
}

struct Basis {
    order: usize,
    monomials: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

impl Basis {
    fn new(dim: usize, order: usize) -> Self {
        let monomials = multi_indices(dim, order);
        let lookup = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Basis {
            order,
            monomials,
            lookup,
        }
    }

    fn mul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; a.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let mi = &self.monomials[i];
            let di: u32 = mi.iter().sum();
            for (j, &y) in b.iter().enumerate() {
                if y == 0.0 {
                    continue;
                }
                let mj = &self.monomials[j];
                let dj: u32 = mj.iter().sum();
                if (di + dj) as usize > self.order {
                    continue;
                }
                let key: MultiIndex = mi.iter().zip(mj).map(|(p, q)| p + q).collect();
                out[self.lookup[&key]] += x * y;
            }
        }
        out
    }
}

/// Taylor coefficients: `coefficients[(t, i)]` multiplies `h^indices[t]` in the
/// expansion of the coupling to control `i`. The coefficient of `h^b` equals
/// the mixed partial derivative `d^b f / b!`.
#[derive(Debug, Clone)]
pub struct FieldSeries {
    pub indices: Vec<MultiIndex>,
    pub coefficients: DMatrix<f64>,
}

impl FieldSeries {
    /// Evaluate the truncated series for every control at displacement `h`.
    pub fn evaluate(&self, h: &[f64]) -> Vec<f64> {
        let mono: Vec<f64> = self
            .indices
            .iter()
            .map(|m| {
                m.iter()
                    .zip(h)
                    .map(|(&e, &x)| x.powi(e as i32))
                    .product()
            })
            .collect();
        (0..self.coefficients.ncols())
            .map(|i| {
                mono.iter()
                    .enumerate()
                    .map(|(t, v)| v * self.coefficients[(t, i)])
                    .sum()
            })
            .collect()
    }
}

pub(crate) fn field_series(r: &Position, layout: &Layout, order: usize) -> FieldSeries {
    let dim = layout.dim();
    let basis = Basis::new(dim, order);
    let terms = basis.monomials.len();
    let p = -layout.exponent() / 2.0;
    let mut coefficients = DMatrix::zeros(terms, layout.n_controls());

    for (i, c) in layout.controls().iter().enumerate() {
        let delta: Vec<f64> = r.coords().iter().zip(c.coords()).map(|(a, b)| a - b).collect();
        let s0: f64 = delta.iter().map(|x| x * x).sum();

        // u(h) / s0 with u = sum_d 2 delta_d h_d + h_d^2
        let mut u = vec![0.0; terms];
        for d in 0..dim {
            let mut lin = vec![0u32; dim];
            lin[d] = 1;
            if let Some(&k) = basis.lookup.get(&lin) {
                u[k] += 2.0 * delta[d] / s0;
            }
            let mut quad = vec![0u32; dim];
            quad[d] = 2;
            if let Some(&k) = basis.lookup.get(&quad) {
                u[k] += 1.0 / s0;
            }
        }

        let mut total = vec![0.0; terms];
        let mut power = vec![0.0; terms];
        power[0] = 1.0;
        let mut binom = 1.0;
        for m in 0..=order {
            if m > 0 {
                power = basis.mul(&power, &u);
                binom *= (p - (m as f64 - 1.0)) / m as f64;
            }
            for (t, v) in power.iter().enumerate() {
                total[t] += binom * v;
            }
        }
        let pref = layout.coupling_constant() * s0.powf(p);
        for t in 0..terms {
            coefficients[(t, i)] = pref * total[t];
        }
    }
    FieldSeries {
        indices: basis.monomials,
        coefficients,
    }
}
