//! Dense state-vector engine.
//!
//! Qubit `q` of an `m`-qubit register is bit `m - 1 - q` of the basis index,
//! so the first qubit is the leftmost symbol of a ket. Bit value 0 is the
//! `Z = +1` eigenstate. Control qubits come first; in the logical register
//! the whole control system is a single qubit at index 0.

mod hamiltonian;
mod mixed;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::FlipSchedule;
use crate::pauli::{self, Mat2, PauliAxis};

pub use hamiltonian::{DiagonalHamiltonian, ZTerm};
pub use mixed::MixedState;

/// Largest register the dense engine accepts.
pub const MAX_QUBITS: usize = 22;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Register {
    /// Every control qubit simulated explicitly.
    Physical { controls: usize, targets: usize },
    /// The control system collapsed to one logical qubit.
    Logical { targets: usize },
}

impl Register {
    pub fn qubits(&self) -> usize {
        match *self {
            Register::Physical { controls, targets } => controls + targets,
            Register::Logical { targets } => 1 + targets,
        }
    }

    pub fn n_controls(&self) -> usize {
        match *self {
            Register::Physical { controls, .. } => controls,
            Register::Logical { .. } => 1,
        }
    }

    pub fn n_targets(&self) -> usize {
        match *self {
            Register::Physical { targets, .. } | Register::Logical { targets } => targets,
        }
    }

    pub fn is_logical(&self) -> bool {
        matches!(self, Register::Logical { .. })
    }

    pub fn control_qubit(&self, i: usize) -> usize {
        i
    }

    pub fn target_qubit(&self, j: usize) -> usize {
        self.n_controls() + j
    }

    pub fn target_qubits(&self) -> Vec<usize> {
        (0..self.n_targets()).map(|j| self.target_qubit(j)).collect()
    }

    pub fn control_qubits(&self) -> Vec<usize> {
        (0..self.n_controls()).collect()
    }

    fn check(&self) -> Result<()> {
        let m = self.qubits();
        if m > MAX_QUBITS {
            return Err(Error::ResourceCap {
                requested: m,
                cap: MAX_QUBITS,
            });
        }
        Ok(())
    }
}

/// Orthonormal single-qubit basis `{first, second}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    first: [Complex64; 2],
    second: [Complex64; 2],
}

impl MeasurementBasis {
    pub fn new(first: [Complex64; 2], second: [Complex64; 2]) -> Result<Self> {
        let n1 = first[0].norm_sqr() + first[1].norm_sqr();
        let n2 = second[0].norm_sqr() + second[1].norm_sqr();
        let ip = first[0].conj() * second[0] + first[1].conj() * second[1];
        if (n1 - 1.0).abs() > 1e-10 || (n2 - 1.0).abs() > 1e-10 || ip.norm() > 1e-10 {
            return Err(Error::InvalidArgument("measurement basis is not orthonormal".into()));
        }
        Ok(MeasurementBasis { first, second })
    }

    /// Basis completing the (normalized) vector `u`.
    pub fn from_vector(u: [Complex64; 2]) -> Result<Self> {
        let n = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        if !(n > 0.0) {
            return Err(Error::InvalidArgument("zero basis vector".into()));
        }
        let first = [u[0] / n, u[1] / n];
        let second = [-first[1].conj(), first[0].conj()];
        Self::new(first, second)
    }

    pub fn z() -> Self {
        Self::axis(PauliAxis::Z)
    }

    pub fn x() -> Self {
        Self::axis(PauliAxis::X)
    }

    pub fn y() -> Self {
        Self::axis(PauliAxis::Y)
    }

    /// Eigenbasis of a Pauli axis, `+1` eigenvector first.
    pub fn axis(axis: PauliAxis) -> Self {
        let p = pauli::SignedPauli { sign: 1, axis };
        MeasurementBasis {
            first: p.eigenvector(1),
            second: p.eigenvector(-1),
        }
    }

    pub fn vector(&self, outcome: Outcome) -> [Complex64; 2] {
        match outcome {
            Outcome::Plus => self.first,
            Outcome::Minus => self.second,
        }
    }
}

/// Result of a two-outcome measurement; `Plus` is the first basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_sign(s: i8) -> Self {
        if s >= 0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }
}

/// One factor of a Trotter product.
#[derive(Debug, Clone)]
pub enum TrotterTerm {
    Diagonal(DiagonalHamiltonian),
    /// `strength * P_qubit`.
    Field { qubit: usize, axis: PauliAxis, strength: f64 },
}

impl TrotterTerm {
    /// `omega * X` on the logical control qubit.
    pub fn logical_x(omega: f64) -> Self {
        TrotterTerm::Field {
            qubit: 0,
            axis: PauliAxis::X,
            strength: omega,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: Register,
    amps: Vec<Complex64>,
}

impl PureState {
    /// All qubits in `|0>`.
    pub fn zero(register: Register) -> Result<Self> {
        register.check()?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << register.qubits()];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(PureState { register, amps })
    }

    pub fn basis(register: Register, index: usize) -> Result<Self> {
        let mut s = Self::zero(register)?;
        if index >= s.amps.len() {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range")));
        }
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Product of single-qubit states, one per qubit.
    pub fn product(register: Register, qubits: &[[Complex64; 2]]) -> Result<Self> {
        register.check()?;
        let m = register.qubits();
        if qubits.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{} single-qubit states for a {m}-qubit register",
                qubits.len()
            )));
        }
        let amps = (0..1usize << m)
            .map(|b| {
                (0..m)
                    .map(|q| qubits[q][(b >> (m - 1 - q)) & 1])
                    .product::<Complex64>()
            })
            .collect();
        Self::from_amplitudes(register, amps)
    }

    /// `|+>` on every qubit.
    pub fn plus(register: Register) -> Result<Self> {
        let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
        Self::product(register, &vec![[h, h]; register.qubits()])
    }

    pub fn from_amplitudes(register: Register, amps: Vec<Complex64>) -> Result<Self> {
        register.check()?;
        if amps.len() != 1 << register.qubits() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a {}-qubit register",
                amps.len(),
                register.qubits()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("state has zero norm".into()));
        }
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("state norm {norm} is not 1")));
        }
        Ok(PureState {
            register,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn register(&self) -> Register {
        self.register
    }

    pub fn num_qubits(&self) -> usize {
        self.register.qubits()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits() - 1 - q)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits() {
            return Err(Error::QubitOutOfRange {
                index: q,
                len: self.num_qubits(),
            });
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch("states of different size".into()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2`, insensitive to global phase.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Multiply each basis amplitude by `exp(-i E(b) t)`.
    pub fn evolve_diagonal(&mut self, h: &DiagonalHamiltonian, t: f64) -> Result<()> {
        if h.qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit Hamiltonian on a {}-qubit state",
                h.qubits(),
                self.num_qubits()
            )));
        }
        if !t.is_finite() {
            return Err(Error::InvalidArgument("non-finite evolution time".into()));
        }
        if t == 0.0 || h.terms().is_empty() {
            return Ok(());
        }
        for (b, a) in self.amps.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -h.energy(b) * t);
        }
        Ok(())
    }

    pub fn apply_x(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let m = self.mask(q);
        for b in 0..self.amps.len() {
            if b & m == 0 {
                self.amps.swap(b, b | m);
            }
        }
        Ok(())
    }

    pub fn apply_single(&mut self, q: usize, u: &Mat2) -> Result<()> {
        self.check_qubit(q)?;
        let m = self.mask(q);
        for b in 0..self.amps.len() {
            if b & m == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | m]);
                self.amps[b] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                self.amps[b | m] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::InvalidArgument("CX with identical qubits".into()));
        }
        let (mc, mt) = (self.mask(control), self.mask(target));
        for b in 0..self.amps.len() {
            if b & mc != 0 && b & mt == 0 {
                self.amps.swap(b, b | mt);
            }
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        let m = self.mask(a) | self.mask(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m == m {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// Interleave diagonal evolution with the schedule's flips. Control qubit
    /// `i` of the schedule is register qubit `i`.
    pub fn run_flip_schedule(&mut self, h: &DiagonalHamiltonian, schedule: &FlipSchedule) -> Result<()> {
        if schedule.n_controls() > self.register.n_controls() || self.register.is_logical() {
            return Err(Error::ModeMismatch(
                "flip schedules act on a physical control register".into(),
            ));
        }
        let mut now = 0.0;
        for e in schedule.events() {
            if e.t < now || e.t > schedule.duration() {
                return Err(Error::InvalidSchedule(format!("event at t = {} out of order", e.t)));
            }
            self.evolve_diagonal(h, e.t - now)?;
            self.apply_x(self.register.control_qubit(e.qubit))?;
            now = e.t;
        }
        self.evolve_diagonal(h, schedule.duration() - now)
    }

    /// `exp(-i t [Z^C sum_j lambda_j Z_j + omega X^C])` on a logical register,
    /// applied exactly as one 2x2 block per target basis string.
    pub fn evolve_control_rotation(&mut self, lambdas: &[f64], omega: f64, t: f64) -> Result<()> {
        let Register::Logical { targets } = self.register else {
            return Err(Error::ModeMismatch("control rotation needs a logical register".into()));
        };
        if lambdas.len() != targets {
            return Err(Error::DimensionMismatch(format!(
                "pattern of length {} for {targets} targets",
                lambdas.len()
            )));
        }
        let half = 1usize << targets;
        for s in 0..half {
            let lz: f64 = (0..targets)
                .map(|j| if (s >> (targets - 1 - j)) & 1 == 0 { lambdas[j] } else { -lambdas[j] })
                .sum();
            let u = block(lz, omega, t);
            let (a0, a1) = (self.amps[s], self.amps[half | s]);
            self.amps[s] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            self.amps[half | s] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
        Ok(())
    }

    /// The same rotation on a physical register whose control qubits hold
    /// `span{|x>, |~x>}`, `|x>` playing the role of `|0_L>`. Fails if any
    /// amplitude lies outside that span.
    pub fn evolve_subspace_rotation(&mut self, x: usize, lambdas: &[f64], omega: f64, t: f64) -> Result<()> {
        let Register::Physical { controls, targets } = self.register else {
            return Err(Error::ModeMismatch("subspace rotation needs a physical register".into()));
        };
        if lambdas.len() != targets {
            return Err(Error::DimensionMismatch(format!(
                "pattern of length {} for {targets} targets",
                lambdas.len()
            )));
        }
        if controls == 0 || x >> controls != 0 {
            return Err(Error::InvalidArgument(format!("control string {x} out of range")));
        }
        let xc = x ^ ((1 << controls) - 1);
        let leak: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(b, _)| {
                let cb = b >> targets;
                cb != x && cb != xc
            })
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if leak > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "control register has left its logical subspace (weight {leak:.3e})"
            )));
        }
        for s in 0..1usize << targets {
            let lz: f64 = (0..targets)
                .map(|j| if (s >> (targets - 1 - j)) & 1 == 0 { lambdas[j] } else { -lambdas[j] })
                .sum();
            let u = block(lz, omega, t);
            let (i0, i1) = ((x << targets) | s, (xc << targets) | s);
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            self.amps[i1] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
        Ok(())
    }

    /// `k` first-order Trotter steps of the listed terms over total time `t`.
    pub fn trotter_evolve(&mut self, terms: &[TrotterTerm], t: f64, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidArgument("Trotter step count must be positive".into()));
        }
        let dt = t / k as f64;
        for _ in 0..k {
            for term in terms {
                match term {
                    TrotterTerm::Diagonal(h) => self.evolve_diagonal(h, dt)?,
                    TrotterTerm::Field { qubit, axis, strength } => {
                        self.apply_single(*qubit, &pauli::rotation(*axis, strength * dt))?
                    }
                }
            }
        }
        Ok(())
    }

    /// Probability of finding `qubit` in the single-qubit state `v`.
    pub fn probability(&self, qubit: usize, v: &[Complex64; 2]) -> Result<f64> {
        self.check_qubit(qubit)?;
        let m = self.mask(qubit);
        Ok((0..self.amps.len())
            .filter(|b| b & m == 0)
            .map(|b| (v[0].conj() * self.amps[b] + v[1].conj() * self.amps[b | m]).norm_sqr())
            .sum())
    }

    /// Project `qubit` onto `v` and renormalize; returns the branch probability.
    pub fn project(&mut self, qubit: usize, v: &[Complex64; 2]) -> Result<f64> {
        let p = self.probability(qubit, v)?;
        if p <= 1e-15 {
            return Err(Error::ZeroProbabilityBranch);
        }
        let m = self.mask(qubit);
        let scale = 1.0 / p.sqrt();
        for b in 0..self.amps.len() {
            if b & m == 0 {
                let c = (v[0].conj() * self.amps[b] + v[1].conj() * self.amps[b | m]) * scale;
                self.amps[b] = v[0] * c;
                self.amps[b | m] = v[1] * c;
            }
        }
        Ok(p)
    }

    /// Born-rule measurement of one qubit.
    pub fn measure<R: Rng + ?Sized>(&mut self, qubit: usize, basis: &MeasurementBasis, rng: &mut R) -> Result<Outcome> {
        let p = self.probability(qubit, &basis.first)?;
        let outcome = if rng.gen::<f64>() < p { Outcome::Plus } else { Outcome::Minus };
        self.project(qubit, &basis.vector(outcome))?;
        Ok(outcome)
    }

    /// Collapse onto a chosen outcome; returns its probability.
    pub fn measure_forced(&mut self, qubit: usize, basis: &MeasurementBasis, outcome: Outcome) -> Result<f64> {
        self.project(qubit, &basis.vector(outcome))
    }

    /// `<psi| tr_rest(rho) |psi>` with `psi` a state of the `keep` qubits (in
    /// ascending order).
    pub fn fidelity(&self, target: &PureState, keep: &[usize]) -> Result<f64> {
        let keep = sorted_subset(keep, self.num_qubits())?;
        if target.amps.len() != 1 << keep.len() {
            return Err(Error::DimensionMismatch(format!(
                "target of {} qubits for {} kept qubits",
                target.num_qubits(),
                keep.len()
            )));
        }
        let m = self.num_qubits();
        let rest: Vec<usize> = (0..m).filter(|q| !keep.contains(q)).collect();
        let mut total = 0.0;
        for r in 0..1usize << rest.len() {
            let mut base = 0usize;
            for (k, &q) in rest.iter().enumerate() {
                if (r >> (rest.len() - 1 - k)) & 1 == 1 {
                    base |= 1 << (m - 1 - q);
                }
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for (kidx, t) in target.amps.iter().enumerate() {
                let mut b = base;
                for (k, &q) in keep.iter().enumerate() {
                    if (kidx >> (keep.len() - 1 - k)) & 1 == 1 {
                        b |= 1 << (m - 1 - q);
                    }
                }
                acc += t.conj() * self.amps[b];
            }
            total += acc.norm_sqr();
        }
        Ok(total)
    }

    /// Reduced density operator of the `keep` qubits (ascending order).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<MixedState> {
        MixedState::from_pure(self).partial_trace(keep)
    }

    /// `(re, im)` pairs for debugging output.
    pub fn to_pairs(&self) -> Vec<(f64, f64)> {
        self.amps.iter().map(|a| (a.re, a.im)).collect()
    }

    /// Check the unit-norm invariant.
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL * 10.0
    }
}

pub(crate) fn sorted_subset(keep: &[usize], m: usize) -> Result<Vec<usize>> {
    let mut k = keep.to_vec();
    k.sort_unstable();
    k.dedup();
    if k.len() != keep.len() {
        return Err(Error::InvalidArgument("repeated qubit in kept subset".into()));
    }
    if let Some(&q) = k.iter().find(|&&q| q >= m) {
        return Err(Error::QubitOutOfRange { index: q, len: m });
    }
    Ok(k)
}

/// `cos(t W) 1 - i sin(t W)/W (lz Z + omega X)` with `W = sqrt(lz^2 + omega^2)`.
fn block(lz: f64, omega: f64, t: f64) -> Mat2 {
    let w = (lz * lz + omega * omega).sqrt();
    if w == 0.0 {
        return Mat2::identity();
    }
    let (s, c) = (t * w).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let gen = PauliAxis::Z.matrix() * Complex64::from(lz) + PauliAxis::X.matrix() * Complex64::from(omega);
    Mat2::identity() * Complex64::from(c) - gen * (i * (s / w))
}

#[cfg(test)]
mod tests;
