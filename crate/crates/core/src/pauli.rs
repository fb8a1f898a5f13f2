//! Single-qubit Pauli operators and rotations.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Mat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub fn matrix(self) -> Mat2 {
        match self {
            PauliAxis::X => Mat2::new(ZERO, ONE, ONE, ZERO),
            PauliAxis::Y => Mat2::new(ZERO, -I, I, ZERO),
            PauliAxis::Z => Mat2::new(ONE, ZERO, ZERO, -ONE),
        }
    }
}

/// `sign * P` for a Pauli axis `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPauli {
    pub sign: i8,
    pub axis: PauliAxis,
}

impl SignedPauli {
    pub fn matrix(self) -> Mat2 {
        self.axis.matrix() * Complex64::from(f64::from(self.sign))
    }

    /// Eigenvector of `sign * P` with eigenvalue `eigenvalue` (`+1` or `-1`).
    pub fn eigenvector(self, eigenvalue: i8) -> [Complex64; 2] {
        let s = f64::from(self.sign * eigenvalue);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self.axis {
            PauliAxis::X => [Complex64::from(h), Complex64::from(s * h)],
            PauliAxis::Y => [Complex64::from(h), Complex64::new(0.0, s * h)],
            PauliAxis::Z => {
                if s > 0.0 {
                    [ONE, ZERO]
                } else {
                    [ZERO, ONE]
                }
            }
        }
    }
}

impl std::fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = if self.sign < 0 { "-" } else { "+" };
        write!(f, "{s}{:?}", self.axis)
    }
}

pub fn identity() -> Mat2 {
    Mat2::identity()
}

pub fn hadamard() -> Mat2 {
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    Mat2::new(h, h, h, -h)
}

/// Phase gate `diag(1, i)`.
pub fn phase_s() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, I)
}

/// `exp(-i angle P)`.
pub fn rotation(axis: PauliAxis, angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    Mat2::identity() * Complex64::from(c) - axis.matrix() * (I * s)
}

/// Largest entry of `|U^dagger U - 1|`.
pub fn unitarity_defect(u: &Mat2) -> f64 {
    (u.adjoint() * u - Mat2::identity())
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()))
}
