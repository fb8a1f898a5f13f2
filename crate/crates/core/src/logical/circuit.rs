use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{self, Mat2, PauliAxis};
use crate::simulator::{DiagonalHamiltonian, PureState};

use super::decoupling::pair_isolation_schedule;

/// One operation on the control register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    Single {
        qubit: usize,
        label: String,
        matrix: [[Complex64; 2]; 2],
    },
    Cx {
        control: usize,
        target: usize,
    },
    Flip {
        qubit: usize,
    },
    /// Free evolution of the whole register under its always-on couplings.
    Evolve {
        duration: f64,
    },
}

impl Gate {
    pub fn single(qubit: usize, label: &str, u: &Mat2) -> Result<Self> {
        let defect = pauli::unitarity_defect(u);
        if defect > 1e-12 {
            return Err(Error::NonUnitary(defect));
        }
        Ok(Gate::Single {
            qubit,
            label: label.to_string(),
            matrix: [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]],
        })
    }
}

fn to_mat(m: &[[Complex64; 2]; 2]) -> Mat2 {
    Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

/// Ordered gate list over `qubits` control qubits.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GateCircuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl GateCircuit {
    pub fn new(qubits: usize) -> Self {
        GateCircuit {
            qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let check = |q: usize| {
            if q >= self.qubits {
                Err(Error::QubitOutOfRange {
                    index: q,
                    len: self.qubits,
                })
            } else {
                Ok(())
            }
        };
        match &gate {
            Gate::Single { qubit, matrix, .. } => {
                check(*qubit)?;
                let defect = pauli::unitarity_defect(&to_mat(matrix));
                if defect > 1e-12 {
                    return Err(Error::NonUnitary(defect));
                }
            }
            Gate::Cx { control, target } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::InvalidArgument("CX on a single qubit".into()));
                }
            }
            Gate::Flip { qubit } => check(*qubit)?,
            Gate::Evolve { duration } => {
                if !(*duration >= 0.0 && duration.is_finite()) {
                    return Err(Error::InvalidArgument(format!("bad segment {duration}")));
                }
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &GateCircuit) -> Result<()> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cx { .. })).count()
    }

    pub fn flip_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Flip { .. })).count()
    }

    pub fn duration(&self) -> f64 {
        self.gates
            .iter()
            .map(|g| if let Gate::Evolve { duration } = g { *duration } else { 0.0 })
            .sum()
    }

    /// Replace each CX by single-qubit gates around an isolated pair
    /// interaction, using the register's internal couplings `control_couplings`.
    pub fn compile(&self, control_couplings: &DMatrix<f64>) -> Result<GateCircuit> {
        if control_couplings.nrows() != self.qubits || control_couplings.ncols() != self.qubits {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} couplings for {} qubits",
                control_couplings.nrows(),
                control_couplings.ncols(),
                self.qubits
            )));
        }
        let mut out = GateCircuit::new(self.qubits);
        for g in &self.gates {
            match g {
                Gate::Cx { control, target } => {
                    out.extend(&cx_via_coupling(self.qubits, *control, *target, control_couplings[(*control, *target)])?)?
                }
                other => out.push(other.clone())?,
            }
        }
        Ok(out)
    }

    /// Apply to the first `qubits` qubits of `state`; `Evolve` segments use `h`.
    pub fn run(&self, state: &mut PureState, h: &DiagonalHamiltonian) -> Result<()> {
        if state.num_qubits() < self.qubits {
            return Err(Error::DimensionMismatch("circuit wider than the state".into()));
        }
        for g in &self.gates {
            match g {
                Gate::Single { qubit, matrix, .. } => state.apply_single(*qubit, &to_mat(matrix))?,
                Gate::Cx { control, target } => state.apply_cx(*control, *target)?,
                Gate::Flip { qubit } => state.apply_x(*qubit)?,
                Gate::Evolve { duration } => state.evolve_diagonal(h, *duration)?,
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }
}

/// Pair time with `f T = pi/4 (mod pi)`.
pub fn cx_pair_time(f: f64) -> Result<f64> {
    if !(f.abs() > 0.0) || !f.is_finite() {
        return Err(Error::InvalidArgument(format!("pair coupling {f} cannot drive a CX")));
    }
    Ok(if f > 0.0 { FRAC_PI_4 / f } else { (PI - FRAC_PI_4) / f.abs() })
}

/// `CX(a -> b) = H_b R_a R_b exp(-i pi/4 Z_a Z_b) H_b` up to a global phase,
/// with `R = exp(+i pi/4 Z)` and the pair interaction isolated by flips.
pub fn cx_via_coupling(n: usize, a: usize, b: usize, f: f64) -> Result<GateCircuit> {
    let total = cx_pair_time(f)?;
    let iso = pair_isolation_schedule(n, (a, b), 1.0)?;
    let t = total / iso.schedule.duration();
    let iso = pair_isolation_schedule(n, (a, b), t)?;
    let mut c = GateCircuit::new(n);
    let h = pauli::hadamard();
    let r = pauli::rotation(PauliAxis::Z, -FRAC_PI_4);
    c.push(Gate::single(b, "H", &h)?)?;
    let mut now = 0.0;
    for e in iso.schedule.events() {
        if e.t > now {
            c.push(Gate::Evolve { duration: e.t - now })?;
            now = e.t;
        }
        c.push(Gate::Flip { qubit: e.qubit })?;
    }
    if iso.schedule.duration() > now {
        c.push(Gate::Evolve {
            duration: iso.schedule.duration() - now,
        })?;
    }
    c.push(Gate::single(a, "Rz", &r)?)?;
    c.push(Gate::single(b, "Rz", &r)?)?;
    c.push(Gate::single(b, "H", &h)?)?;
    Ok(c)
}

fn cx_chain(c: &mut GateCircuit, n: usize) -> Result<()> {
    for i in 1..n {
        c.push(Gate::Cx { control: 0, target: i })?;
    }
    Ok(())
}

/// CX chain from qubit 0, `v` on qubit 0, CX chain again. On
/// `span{|0...0>, |1...1>}` this acts as `v` on the logical qubit.
pub fn logical_gate_circuit(v: &Mat2, n: usize) -> Result<GateCircuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("empty control register".into()));
    }
    let mut c = GateCircuit::new(n);
    cx_chain(&mut c, n)?;
    c.push(Gate::single(0, "V", v)?)?;
    cx_chain(&mut c, n)?;
    Ok(c)
}

/// Hadamard on qubit 0 followed by the CX chain: `|0...0>` to
/// `(|0...0> + |1...1>)/sqrt 2`.
pub fn logical_plus_prep_circuit(n: usize) -> Result<GateCircuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("empty control register".into()));
    }
    let mut c = GateCircuit::new(n);
    c.push(Gate::single(0, "H", &pauli::hadamard())?)?;
    cx_chain(&mut c, n)?;
    Ok(c)
}

/// Product of physical `exp(-i phi_i Z_i)` and the logical angle it induces
/// when the register holds orientation `c` (entries `+1` or `-1`): qubit `i`
/// contributes `c_i phi_i`.
pub fn logical_z_rotation(angles: &[f64], c: &[f64]) -> Result<(GateCircuit, f64)> {
    if angles.len() != c.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} angles for {} qubits",
            angles.len(),
            c.len()
        )));
    }
    let mut circuit = GateCircuit::new(c.len());
    let mut total = 0.0;
    for (i, (&phi, &ci)) in angles.iter().zip(c).enumerate() {
        if phi == 0.0 {
            continue;
        }
        if ci == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "qubit {i} has no orientation but carries a rotation"
            )));
        }
        circuit.push(Gate::single(i, "Rz", &pauli::rotation(PauliAxis::Z, phi))?)?;
        total += ci * phi;
    }
    Ok((circuit, total))
}
