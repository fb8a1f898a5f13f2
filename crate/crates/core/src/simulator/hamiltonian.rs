use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CouplingMatrix, SelfCouplings};

use super::Register;

/// `coefficient * prod_{q in support} Z_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZTerm {
    pub coefficient: f64,
    pub support: Vec<usize>,
}

/// Sum of Z-string terms over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalHamiltonian {
    qubits: usize,
    terms: Vec<ZTerm>,
    #[serde(skip)]
    masks: Vec<usize>,
}

impl DiagonalHamiltonian {
    pub fn new(qubits: usize) -> Self {
        DiagonalHamiltonian {
            qubits,
            terms: Vec::new(),
            masks: Vec::new(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn terms(&self) -> &[ZTerm] {
        &self.terms
    }

    pub fn add_term(&mut self, coefficient: f64, support: &[usize]) -> Result<()> {
        if support.is_empty() {
            return Err(Error::InvalidArgument("term with empty support".into()));
        }
        if !coefficient.is_finite() {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        let mut mask = 0usize;
        for &q in support {
            if q >= self.qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    len: self.qubits,
                });
            }
            mask ^= 1 << (self.qubits - 1 - q);
        }
        self.terms.push(ZTerm {
            coefficient,
            support: support.to_vec(),
        });
        self.masks.push(mask);
        Ok(())
    }

    pub fn with_term(mut self, coefficient: f64, support: &[usize]) -> Result<Self> {
        self.add_term(coefficient, support)?;
        Ok(self)
    }

    /// Append every term of `other` (same register size).
    pub fn extend(&mut self, other: &DiagonalHamiltonian) -> Result<()> {
        if other.qubits != self.qubits {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit terms added to a {}-qubit Hamiltonian",
                other.qubits, self.qubits
            )));
        }
        for t in &other.terms {
            self.add_term(t.coefficient, &t.support)?;
        }
        Ok(())
    }

    /// Energy of computational basis state `index` (bit 0 is spin +1).
    pub fn energy(&self, index: usize) -> f64 {
        self.masks
            .iter()
            .zip(&self.terms)
            .map(|(m, t)| {
                if (index & m).count_ones() % 2 == 0 {
                    t.coefficient
                } else {
                    -t.coefficient
                }
            })
            .sum()
    }

    /// The Hamiltonian conjugated by `X_q`: every term containing `q` changes sign.
    pub fn with_negated_qubit(&self, q: usize) -> Self {
        let mut out = DiagonalHamiltonian::new(self.qubits);
        for t in &self.terms {
            let c = if t.support.contains(&q) { -t.coefficient } else { t.coefficient };
            out.add_term(c, &t.support).expect("terms already validated");
        }
        out
    }

    /// `sum_{i,j} F[j][i] Z_{C_i} Z_{S_j}` on a physical register.
    pub fn control_target(register: Register, f: &CouplingMatrix) -> Result<Self> {
        let Register::Physical { controls, targets } = register else {
            return Err(Error::ModeMismatch("physical register required".into()));
        };
        if f.n_controls() != controls || f.n_targets() != targets {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} coupling matrix for {targets} targets and {controls} controls",
                f.n_targets(),
                f.n_controls()
            )));
        }
        let mut h = DiagonalHamiltonian::new(register.qubits());
        for j in 0..targets {
            for i in 0..controls {
                h.add_term(f.get(j, i), &[register.control_qubit(i), register.target_qubit(j)])?;
            }
        }
        Ok(h)
    }

    /// `Z^C sum_j lambda_j Z_{S_j}` on a logical register.
    pub fn logical_pattern(register: Register, lambdas: &[f64]) -> Result<Self> {
        if !register.is_logical() {
            return Err(Error::ModeMismatch("logical register required".into()));
        }
        if lambdas.len() != register.n_targets() {
            return Err(Error::DimensionMismatch(format!(
                "pattern of length {} for {} targets",
                lambdas.len(),
                register.n_targets()
            )));
        }
        let mut h = DiagonalHamiltonian::new(register.qubits());
        for (j, &l) in lambdas.iter().enumerate() {
            if l != 0.0 {
                h.add_term(l, &[0, register.target_qubit(j)])?;
            }
        }
        Ok(h)
    }

    /// Pairwise self-interactions of the control register (physical only)
    /// and/or the target register.
    pub fn self_interaction(
        register: Register,
        couplings: &SelfCouplings,
        control: bool,
        target: bool,
    ) -> Result<Self> {
        let mut h = DiagonalHamiltonian::new(register.qubits());
        if control {
            if let Register::Physical { controls, .. } = register {
                if couplings.control.nrows() != controls {
                    return Err(Error::DimensionMismatch("control self-couplings".into()));
                }
                for a in 0..controls {
                    for b in a + 1..controls {
                        let f = couplings.control[(a, b)];
                        if f != 0.0 {
                            h.add_term(f, &[register.control_qubit(a), register.control_qubit(b)])?;
                        }
                    }
                }
            }
        }
        if target {
            let n = register.n_targets();
            if couplings.target.nrows() != n {
                return Err(Error::DimensionMismatch("target self-couplings".into()));
            }
            for a in 0..n {
                for b in a + 1..n {
                    let f = couplings.target[(a, b)];
                    if f != 0.0 {
                        h.add_term(f, &[register.target_qubit(a), register.target_qubit(b)])?;
                    }
                }
            }
        }
        Ok(h)
    }
}
