use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliAxis;

/// Anisotropic control-target couplings `alpha XX + beta YY + gamma ZZ`,
/// each `n_targets x n_controls`.
#[derive(Debug, Clone, PartialEq)]
pub struct XyzCouplings {
    pub alpha: DMatrix<f64>,
    pub beta: DMatrix<f64>,
    pub gamma: DMatrix<f64>,
}

impl XyzCouplings {
    pub fn isotropic(f: &DMatrix<f64>) -> Self {
        XyzCouplings {
            alpha: f.clone(),
            beta: f.clone(),
            gamma: f.clone(),
        }
    }

    fn dims(&self) -> Result<(usize, usize)> {
        let (m, n) = self.gamma.shape();
        if self.alpha.shape() != (m, n) || self.beta.shape() != (m, n) {
            return Err(Error::DimensionMismatch("coupling tensors differ in shape".into()));
        }
        if n + m > 10 {
            return Err(Error::ResourceCap { requested: n + m, cap: 10 });
        }
        Ok((n, m))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergRun {
    pub steps: usize,
    pub time: f64,
    /// Phase-optimal distance `sqrt(2 - 2 |tr(V^dag P)| / d)` to `V = exp(-i H_zz t)`.
    pub error: f64,
}

fn kron_pauli(axis: PauliAxis, q: usize, m: usize) -> DMatrix<Complex64> {
    let p = axis.matrix();
    let d = 1usize << m;
    let bit = m - 1 - q;
    DMatrix::from_fn(d, d, |r, c| {
        if (r ^ c) & !(1 << bit) != 0 {
            return Complex64::new(0.0, 0.0);
        }
        p[((r >> bit) & 1, (c >> bit) & 1)]
    })
}

fn hamiltonian(c: &XyzCouplings, zz_only: bool) -> Result<DMatrix<Complex64>> {
    let (n, m) = c.dims()?;
    let q = n + m;
    let d = 1usize << q;
    let mut h = DMatrix::zeros(d, d);
    for j in 0..m {
        for i in 0..n {
            let terms = [
                (PauliAxis::X, c.alpha[(j, i)]),
                (PauliAxis::Y, c.beta[(j, i)]),
                (PauliAxis::Z, c.gamma[(j, i)]),
            ];
            for (axis, w) in terms {
                if w == 0.0 || (zz_only && axis != PauliAxis::Z) {
                    continue;
                }
                h += kron_pauli(axis, i, q) * kron_pauli(axis, n + j, q) * Complex64::from(w);
            }
        }
    }
    Ok(h)
}

/// `exp(-i h t)` for Hermitian `h`.
pub fn expm_hermitian(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t)));
    v * phases * v.adjoint()
}

/// Alternate `U(t/2k)` with its copy conjugated by `Z` on every control,
/// `k` times; the transverse parts average out and the `ZZ` part remains.
pub fn heisenberg_to_zz(c: &XyzCouplings, t: f64, k: usize) -> Result<HeisenbergRun> {
    if k == 0 {
        return Err(Error::InvalidArgument("step count must be positive".into()));
    }
    let (n, m) = c.dims()?;
    let q = n + m;
    let h = hamiltonian(c, false)?;
    let u = expm_hermitian(&h, t / (2.0 * k as f64));
    let mut zc = DMatrix::<Complex64>::identity(1 << q, 1 << q);
    for i in 0..n {
        zc *= kron_pauli(PauliAxis::Z, i, q);
    }
    let ut = &zc * &u * &zc;
    let step = &ut * &u;
    let mut p = DMatrix::<Complex64>::identity(1 << q, 1 << q);
    for _ in 0..k {
        p = &step * p;
    }
    let want = expm_hermitian(&hamiltonian(c, true)?, t);
    let d = (1usize << q) as f64;
    let tr = (want.adjoint() * p).trace().norm();
    Ok(HeisenbergRun {
        steps: k,
        time: t,
        error: (2.0 - 2.0 * tr / d).max(0.0).sqrt(),
    })
}
