use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::{sorted_subset, PureState};

/// Density operator over `qubits` qubits in the same bit order as [`PureState`].
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    qubits: usize,
    rho: DMatrix<Complex64>,
}

impl MixedState {
    pub fn from_pure(state: &PureState) -> Self {
        let v = state.amplitudes();
        let rho = DMatrix::from_fn(v.len(), v.len(), |a, b| v[a] * v[b].conj());
        MixedState {
            qubits: state.num_qubits(),
            rho,
        }
    }

    /// Validated density matrix.
    pub fn from_matrix(rho: DMatrix<Complex64>) -> Result<Self> {
        let dim = rho.nrows();
        if dim != rho.ncols() || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch("density matrix must be 2^m square".into()));
        }
        let s = MixedState {
            qubits: dim.trailing_zeros() as usize,
            rho,
        };
        s.validate()?;
        Ok(s)
    }

    /// Weighted mixture of pure states with weights summing to one.
    pub fn mixture<'a>(items: impl IntoIterator<Item = (f64, &'a PureState)>) -> Result<Self> {
        let mut acc: Option<DMatrix<Complex64>> = None;
        let mut qubits = 0;
        for (w, s) in items {
            let v = s.amplitudes();
            let m = acc.get_or_insert_with(|| {
                qubits = s.num_qubits();
                DMatrix::zeros(v.len(), v.len())
            });
            if m.nrows() != v.len() {
                return Err(Error::DimensionMismatch("mixture of different registers".into()));
            }
            for a in 0..v.len() {
                let wa = v[a] * w;
                for b in 0..v.len() {
                    m[(a, b)] += wa * v[b].conj();
                }
            }
        }
        let rho = acc.ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        Ok(MixedState { qubits, rho })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.rho - self.rho.adjoint())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::from(0.5);
        h.symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, x| m.min(*x))
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Hermitian, unit trace and positive semidefinite within tolerance.
    pub fn validate(&self) -> Result<()> {
        if self.hermiticity_defect() > 1e-10 {
            return Err(Error::InvalidArgument("density matrix is not Hermitian".into()));
        }
        if (self.trace() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "density matrix has trace {}",
                self.trace()
            )));
        }
        if self.min_eigenvalue() < -1e-10 {
            return Err(Error::InvalidArgument("density matrix is not positive".into()));
        }
        Ok(())
    }

    /// Trace out every qubit not in `keep`; kept qubits stay in ascending order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<MixedState> {
        let keep = sorted_subset(keep, self.qubits)?;
        let m = self.qubits;
        let rest: Vec<usize> = (0..m).filter(|q| !keep.contains(q)).collect();
        let spread = |idx: usize, qs: &[usize]| -> usize {
            qs.iter().enumerate().fold(0usize, |acc, (k, &q)| {
                if (idx >> (qs.len() - 1 - k)) & 1 == 1 {
                    acc | 1 << (m - 1 - q)
                } else {
                    acc
                }
            })
        };
        let dk = 1usize << keep.len();
        let mut out = DMatrix::zeros(dk, dk);
        for r in 0..1usize << rest.len() {
            let base = spread(r, &rest);
            for a in 0..dk {
                let ia = base | spread(a, &keep);
                for b in 0..dk {
                    out[(a, b)] += self.rho[(ia, base | spread(b, &keep))];
                }
            }
        }
        Ok(MixedState {
            qubits: keep.len(),
            rho: out,
        })
    }

    /// `<psi| tr_rest(rho) |psi>`.
    pub fn fidelity(&self, target: &PureState, keep: &[usize]) -> Result<f64> {
        let red = self.partial_trace(keep)?;
        let v = target.amplitudes();
        if v.len() != red.rho.nrows() {
            return Err(Error::DimensionMismatch("target size does not match kept qubits".into()));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..v.len() {
            for b in 0..v.len() {
                acc += v[a].conj() * red.rho[(a, b)] * v[b];
            }
        }
        Ok(acc.re)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::from(0.5);
        h.symmetric_eigenvalues()
            .iter()
            .filter(|x| **x > 1e-14)
            .map(|x| -x * x.log2())
            .sum()
    }
}
