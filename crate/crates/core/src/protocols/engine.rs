use std::collections::VecDeque;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::logical::{logical_state, walgate_measurement, Branch, Gate, GateCircuit};
use crate::pattern::{
    compile_flip_schedule_in_frame, max_coupling_vector, solve_pattern, FlipEvent, FlipSchedule, Frame,
    InteractionPattern,
};
use crate::pauli::{self, Mat2, PauliAxis, SignedPauli};
use crate::simulator::{DiagonalHamiltonian, MeasurementBasis, Outcome, PureState, Register};

use super::device::Device;
use super::trace::{FlipCategory, Mode, ProtocolTrace, Step, StepKind};

/// Source of measurement outcomes.
#[derive(Debug, Clone)]
pub enum Branching {
    Random(ChaCha8Rng),
    /// Outcomes taken in order; `Plus` once the queue runs dry.
    Forced(VecDeque<Outcome>),
}

impl Branching {
    pub fn seeded(seed: u64) -> Self {
        Branching::Random(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn forced(outcomes: impl IntoIterator<Item = Outcome>) -> Self {
        Branching::Forced(outcomes.into_iter().collect())
    }
}

/// Runs logical-level steps on either simulation mode and logs them.
pub struct Engine<'d> {
    device: &'d Device,
    mode: Mode,
    state: PureState,
    frame: Frame,
    branching: Branching,
    /// Physical mode: control-target couplings plus control self-couplings.
    coupling: DiagonalHamiltonian,
    target_self: DiagonalHamiltonian,
    /// Compiled `CX(0 -> i)` chain in the all-up frame.
    chain: GateCircuit,
    trace: ProtocolTrace,
}

impl<'d> Engine<'d> {
    /// Control register in `|0_L>`, every target in `|+>`.
    pub fn new(device: &'d Device, mode: Mode, branching: Branching, protocol: &str) -> Result<Self> {
        device.timing.validate()?;
        let n = device.n_controls();
        let m = device.n_targets();
        let register = match mode {
            Mode::Logical => Register::Logical { targets: m },
            Mode::Physical => Register::Physical { controls: n, targets: m },
        };
        let mut state = PureState::zero(register)?;
        let h = pauli::hadamard();
        for q in register.target_qubits() {
            state.apply_single(q, &h)?;
        }
        let coupling = match mode {
            Mode::Physical => {
                let mut h = DiagonalHamiltonian::control_target(register, device.couplings())?;
                h.extend(&DiagonalHamiltonian::self_interaction(register, device.self_couplings(), true, false)?)?;
                h
            }
            Mode::Logical => DiagonalHamiltonian::new(register.qubits()),
        };
        let target_self = DiagonalHamiltonian::self_interaction(register, device.self_couplings(), false, true)?;
        let mut chain = GateCircuit::new(n);
        for i in 1..n {
            chain.push(Gate::Cx { control: 0, target: i })?;
        }
        let chain = chain.compile(&device.self_couplings().control)?;
        Ok(Engine {
            device,
            mode,
            state,
            frame: Frame::up(n),
            branching,
            coupling,
            target_self,
            chain,
            trace: ProtocolTrace::new(protocol, mode, n, m),
        })
    }

    pub fn device(&self) -> &Device {
        self.device
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn trace(&self) -> &ProtocolTrace {
        &self.trace
    }

    pub fn trace_mut(&mut self) -> &mut ProtocolTrace {
        &mut self.trace
    }

    pub fn into_parts(self) -> (ProtocolTrace, PureState) {
        (self.trace, self.state)
    }

    pub fn n_controls(&self) -> usize {
        self.device.n_controls()
    }

    pub fn n_targets(&self) -> usize {
        self.device.n_targets()
    }

    pub fn target_qubits(&self) -> Vec<usize> {
        self.state.register().target_qubits()
    }

    /// Replace the target state; the control register goes to `|0_L>`.
    pub fn set_targets(&mut self, psi: &PureState) -> Result<()> {
        let m = self.n_targets();
        if psi.num_qubits() != m {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit target state for {m} targets",
                psi.num_qubits()
            )));
        }
        let register = self.state.register();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << register.qubits()];
        amps[..1 << m].copy_from_slice(psi.amplitudes());
        self.state = PureState::from_amplitudes(register, amps)?;
        self.frame = Frame::up(self.n_controls());
        Ok(())
    }

    /// Index of the control string that currently plays `|0_L>`.
    fn frame_index(&self) -> usize {
        let n = self.n_controls();
        self.frame
            .bits()
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| if b { acc | 1 << (n - 1 - i) } else { acc })
    }

    /// Logical-level view: physical states are mapped back through the frame.
    pub fn logical_view(&self) -> Result<PureState> {
        if self.mode == Mode::Logical {
            return Ok(self.state.clone());
        }
        let n = self.n_controls();
        let m = self.n_targets();
        let x = self.frame_index();
        let xc = x ^ ((1 << n) - 1);
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 << m];
        let mut kept = 0.0;
        for s in 0..1usize << m {
            amps[s] = self.state.amplitude((x << m) | s);
            amps[(1 << m) | s] = self.state.amplitude((xc << m) | s);
            kept += amps[s].norm_sqr() + amps[(1 << m) | s].norm_sqr();
        }
        if (kept - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "control register has left its logical subspace (weight {:.3e})",
                1.0 - kept
            )));
        }
        PureState::from_amplitudes(Register::Logical { targets: m }, amps)
    }

    fn push(&mut self, kind: StepKind, duration: f64, flips: usize, category: FlipCategory) {
        self.trace.push(Step {
            kind,
            duration,
            flips,
            category,
        });
    }

    fn coupling_hamiltonian(&self, c: &[f64]) -> Result<DiagonalHamiltonian> {
        let mut h = match self.mode {
            Mode::Physical => self.coupling.clone(),
            Mode::Logical => {
                DiagonalHamiltonian::logical_pattern(self.state.register(), &self.device.couplings().pattern(c))?
            }
        };
        if self.device.include_target_self {
            h.extend(&self.target_self)?;
        }
        Ok(h)
    }

    /// Evolve for `duration` with effective control vector `c` (absolute
    /// orientation of the `|0_L>` branch, entries in `[-1, 1]`).
    pub fn couple_vector(&mut self, c: &[f64], duration: f64, category: FlipCategory) -> Result<()> {
        if duration == 0.0 {
            return Ok(());
        }
        let schedule = compile_flip_schedule_in_frame(c, &self.frame, duration)?;
        let h = self.coupling_hamiltonian(c)?;
        match self.mode {
            Mode::Physical => self.state.run_flip_schedule(&h, &schedule)?,
            Mode::Logical => self.state.evolve_diagonal(&h, duration)?,
        }
        self.frame = schedule.terminal_frame().clone();
        let pattern = self.device.couplings().pattern(c);
        self.push(
            StepKind::Couple { c: c.to_vec(), pattern },
            duration,
            schedule.flip_count(),
            category,
        );
        Ok(())
    }

    /// `exp(-i angle Z_L sum_j d_j Z_j)` at the largest reachable strength
    /// along `direction`; returns that strength.
    pub fn couple_max(&mut self, direction: &InteractionPattern, angle: f64, category: FlipCategory) -> Result<f64> {
        let v = max_coupling_vector(self.device.couplings(), direction)?;
        let c: Vec<f64> = if angle < 0.0 { v.negated().c().to_vec() } else { v.c().to_vec() };
        self.couple_vector(&c, angle.abs() * v.scale(), category)?;
        Ok(v.coupling_gain())
    }

    /// `exp(-i t Z_L sum_j lambda_j Z_j)` via the pattern solver.
    pub fn couple_pattern(&mut self, pattern: &InteractionPattern, t: f64, category: FlipCategory) -> Result<()> {
        let v = solve_pattern(self.device.couplings(), pattern)?;
        let c: Vec<f64> = if t < 0.0 { v.negated().c().to_vec() } else { v.c().to_vec() };
        self.couple_vector(&c, t.abs() * v.scale(), category)
    }

    /// Flip control qubits so the `|0_L>` branch has orientation `signs`.
    pub fn orient(&mut self, signs: &[i8]) -> Result<()> {
        let target = Frame::from_signs(signs.to_vec())?;
        if target.len() != self.n_controls() {
            return Err(Error::DimensionMismatch("orientation length".into()));
        }
        let mut flips = 0;
        for i in 0..self.n_controls() {
            if self.frame.sign(i) != target.sign(i) {
                if self.mode == Mode::Physical {
                    self.state.apply_x(i)?;
                }
                flips += 1;
            }
        }
        self.frame = target;
        self.push(StepKind::Orient { signs: signs.to_vec() }, 0.0, flips, FlipCategory::Entangling);
        Ok(())
    }

    /// Flips that bring the frame back to all-up; applied physically.
    fn normalize_frame(&mut self) -> Result<usize> {
        let mut flips = 0;
        for i in 0..self.n_controls() {
            if self.frame.sign(i) < 0.0 {
                if self.mode == Mode::Physical {
                    self.state.apply_x(i)?;
                }
                flips += 1;
            }
        }
        self.frame = Frame::up(self.n_controls());
        Ok(flips)
    }

    /// Run a control circuit built around `first` (gates on qubit 0 before
    /// the closing CX chain), in the all-up frame. Returns circuit flips.
    fn run_circuit(&mut self, circuit: &GateCircuit, logical: &Mat2) -> Result<usize> {
        match self.mode {
            Mode::Physical => {
                let mut h = self.coupling.clone();
                if self.device.include_target_self {
                    h.extend(&self.target_self)?;
                }
                circuit.run(&mut self.state, &h)?;
            }
            Mode::Logical => {
                self.state.apply_single(0, logical)?;
                if self.device.include_target_self {
                    self.state.evolve_diagonal(&self.target_self, circuit.duration())?;
                }
            }
        }
        Ok(circuit.flip_count())
    }

    /// General single-qubit gate `v` on the logical qubit.
    pub fn logical_unitary(&mut self, v: &Mat2, label: &str) -> Result<()> {
        let mut flips = self.normalize_frame()?;
        let n = self.n_controls();
        let mut circuit = GateCircuit::new(n);
        circuit.extend(&self.chain)?;
        circuit.push(Gate::single(0, label, v)?)?;
        circuit.extend(&self.chain)?;
        flips += self.run_circuit(&circuit, v)?;
        let t = self.device.timing.logical_gate;
        self.push(StepKind::LogicalGate { label: label.to_string() }, t, flips, FlipCategory::LogicalGate);
        Ok(())
    }

    /// `exp(-i theta Z_L)` by rotating control qubit 0.
    pub fn logical_z(&mut self, theta: f64) -> Result<()> {
        let phys = match self.mode {
            Mode::Physical => self.frame.sign(0) * theta,
            Mode::Logical => theta,
        };
        self.state.apply_single(0, &pauli::rotation(PauliAxis::Z, phys))?;
        let t = theta.abs() / self.device.timing.drive;
        self.push(
            StepKind::LogicalRotation {
                axis: PauliAxis::Z,
                angle: theta,
            },
            t,
            0,
            FlipCategory::LogicalGate,
        );
        Ok(())
    }

    /// `exp(-i theta X_L) = H exp(-i theta Z_L) H`.
    pub fn logical_x(&mut self, theta: f64) -> Result<()> {
        let h = pauli::hadamard();
        self.logical_unitary(&h, "H")?;
        self.logical_z(theta)?;
        self.logical_unitary(&h, "H")
    }

    /// Measure each control qubit in Z and flip it back to `|0>`; the
    /// register must not be entangled with the targets.
    pub fn reset_control(&mut self) -> Result<()> {
        let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let one = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        for q in self.state.register().control_qubits() {
            if self.state.probability(q, &zero)? >= 0.5 {
                self.state.project(q, &zero)?;
            } else {
                self.state.project(q, &one)?;
                self.state.apply_x(q)?;
            }
        }
        self.frame = Frame::up(self.n_controls());
        self.push(StepKind::Reset, 0.0, 0, FlipCategory::Readout);
        Ok(())
    }

    /// Reset, then prepare the `+1` eigenstate of `g` on the logical qubit.
    pub fn prepare(&mut self, g: SignedPauli) -> Result<()> {
        self.reset_control()?;
        let v = g.eigenvector(1);
        let p = Mat2::new(v[0], -v[1].conj(), v[1], v[0].conj());
        let mut circuit = GateCircuit::new(self.n_controls());
        circuit.push(Gate::single(0, "prep", &p)?)?;
        circuit.extend(&self.chain)?;
        let flips = self.run_circuit(&circuit, &p)?;
        let t = self.device.timing.preparation;
        self.push(StepKind::Prepare { eigenstate: g.to_string() }, t, flips, FlipCategory::Preparation);
        Ok(())
    }

    fn next_forced(&mut self) -> Option<Outcome> {
        match &mut self.branching {
            Branching::Forced(q) => Some(q.pop_front().unwrap_or(Outcome::Plus)),
            Branching::Random(_) => None,
        }
    }

    /// Two-outcome measurement of the logical qubit in `basis`, followed by
    /// a reset of the control register to `|0_L>`.
    pub fn measure(&mut self, basis: &MeasurementBasis, label: &str) -> Result<Outcome> {
        let forced = self.next_forced();
        let (outcome, probability) = match self.mode {
            Mode::Logical => match (forced, &mut self.branching) {
                (Some(o), _) => (o, self.state.measure_forced(0, basis, o)?),
                (None, Branching::Random(rng)) => {
                    let p = self.state.probability(0, &basis.vector(Outcome::Plus))?;
                    let o = if rng.gen::<f64>() < p { Outcome::Plus } else { Outcome::Minus };
                    self.state.measure_forced(0, basis, o)?;
                    (o, if o == Outcome::Plus { p } else { 1.0 - p })
                }
                (None, Branching::Forced(_)) => unreachable!("forced branching always yields an outcome"),
            },
            Mode::Physical => {
                let n = self.n_controls();
                let x = self.frame_index();
                let [a, b] = basis.vector(Outcome::Plus);
                let [c, d] = basis.vector(Outcome::Minus);
                let psi = logical_state(n, x, a, b)?;
                let perp = logical_state(n, x, c, d)?;
                let controls = self.state.register().control_qubits();
                let r = match (forced, &mut self.branching) {
                    (Some(o), _) => {
                        walgate_measurement(&mut self.state, &controls, &psi, &perp, Branch::<ChaCha8Rng>::Forced(o))?
                    }
                    (None, Branching::Random(rng)) => {
                        walgate_measurement(&mut self.state, &controls, &psi, &perp, Branch::Random(rng))?
                    }
                    (None, Branching::Forced(_)) => unreachable!("forced branching always yields an outcome"),
                };
                (r.outcome, r.probability)
            }
        };
        let t = self.device.timing.measurement;
        self.push(
            StepKind::Measure {
                basis: label.to_string(),
                outcome,
                probability,
            },
            t,
            0,
            FlipCategory::Readout,
        );
        self.reset_control()?;
        Ok(outcome)
    }

    /// `prod_{j in subset} Z_j` on the targets, with the control in `|0_L>`.
    pub fn correct_z(&mut self, subset: &[usize]) -> Result<()> {
        let d = InteractionPattern::indicator(self.n_targets(), subset)?;
        self.couple_max(&d, std::f64::consts::FRAC_PI_2, FlipCategory::Correction)?;
        Ok(())
    }

    /// Free evolution of the targets for `t`; the control couplings are
    /// echoed away by two global flips.
    pub fn idle(&mut self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("idle time must be non-negative, got {t}")));
        }
        if t == 0.0 {
            return Ok(());
        }
        let n = self.n_controls();
        let flips = match self.mode {
            Mode::Physical => {
                let events = [t / 2.0, t]
                    .iter()
                    .flat_map(|&at| (0..n).map(move |q| FlipEvent { t: at, qubit: q }))
                    .collect();
                let schedule = FlipSchedule::new(t, events, self.frame.clone())?;
                let mut h = self.coupling.clone();
                h.extend(&self.target_self)?;
                self.state.run_flip_schedule(&h, &schedule)?;
                schedule.flip_count()
            }
            Mode::Logical => {
                self.state.evolve_diagonal(&self.target_self, t)?;
                2 * n
            }
        };
        self.push(StepKind::Idle, t, flips, FlipCategory::Idle);
        Ok(())
    }

    /// `exp(-i t [Z_L sum_j lambda_j Z_j + omega X_L])` with `lambda` set by
    /// the current orientation; no flips.
    pub fn control_field(&mut self, omega: f64, t: f64) -> Result<()> {
        let c: Vec<f64> = self.frame.signs().iter().map(|&s| f64::from(s)).collect();
        let lambdas = self.device.couplings().pattern(&c);
        match self.mode {
            Mode::Logical => self.state.evolve_control_rotation(&lambdas, omega, t)?,
            Mode::Physical => {
                let x = self.frame_index();
                self.state.evolve_subspace_rotation(x, &lambdas, omega, t)?
            }
        }
        if self.device.include_target_self {
            self.state.evolve_diagonal(&self.target_self, t)?;
        }
        self.push(StepKind::ControlField { pattern: lambdas, omega }, t, 0, FlipCategory::Entangling);
        Ok(())
    }

    /// Alternate the current-orientation coupling with logical X rotations,
    /// `k` first-order steps.
    pub fn control_field_trotter(&mut self, omega: f64, t: f64, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::InvalidArgument("step count must be positive".into()));
        }
        let c: Vec<f64> = self.frame.signs().iter().map(|&s| f64::from(s)).collect();
        let dt = t / k as f64;
        for _ in 0..k {
            self.couple_vector(&c, dt, FlipCategory::Entangling)?;
            self.logical_x(omega * dt)?;
        }
        Ok(())
    }
}
