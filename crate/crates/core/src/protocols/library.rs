use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logical::nested_commutator_pauli;
use crate::pattern::InteractionPattern;
use crate::pauli::{PauliAxis, SignedPauli};
use crate::simulator::{MeasurementBasis, MixedState, Outcome, PureState, Register};

use super::engine::Engine;
use super::trace::FlipCategory;

const PLUS_X: SignedPauli = SignedPauli {
    sign: 1,
    axis: PauliAxis::X,
};

fn check_subset(subset: &[usize], n: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("empty target subset".into()));
    }
    for (k, &j) in subset.iter().enumerate() {
        if j >= n {
            return Err(Error::QubitOutOfRange { index: j, len: n });
        }
        if subset[..k].contains(&j) {
            return Err(Error::InvalidArgument(format!("target {j} listed twice")));
        }
    }
    Ok(())
}

fn target_register(n: usize) -> Register {
    Register::Physical { controls: 0, targets: n }
}

/// `exp(-i omega prod_{j in subset} Z_j)` on the targets: couple, rotate the
/// logical qubit about X, uncouple. The control is left in the `+1`
/// eigenstate of the nested-commutator Pauli it was prepared in.
pub fn gate_sequence_multi_z(e: &mut Engine<'_>, subset: &[usize], omega: f64) -> Result<()> {
    let n = e.n_targets();
    check_subset(subset, n)?;
    e.prepare(gate_sequence_control(subset.len()))?;
    let d = InteractionPattern::indicator(n, subset)?;
    e.couple_max(&d, -FRAC_PI_4, FlipCategory::Entangling)?;
    e.logical_x(omega)?;
    e.couple_max(&d, FRAC_PI_4, FlipCategory::Entangling)?;
    Ok(())
}

/// Control eigenstate used by [`gate_sequence_multi_z`] for `k` targets.
pub fn gate_sequence_control(k: usize) -> SignedPauli {
    nested_commutator_pauli(k)
}

/// Phases attached to subsets of the targets, `exp(-i omega_S prod_S Z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhaseTableDoc", into = "PhaseTableDoc")]
pub struct PhaseTable {
    n: usize,
    entries: Vec<(Vec<usize>, f64)>,
}

#[derive(Serialize, Deserialize)]
struct PhaseTableDoc {
    targets: usize,
    terms: Vec<PhaseTerm>,
}

#[derive(Serialize, Deserialize)]
struct PhaseTerm {
    subset: Vec<usize>,
    phase: f64,
}

impl TryFrom<PhaseTableDoc> for PhaseTable {
    type Error = Error;

    fn try_from(doc: PhaseTableDoc) -> Result<Self> {
        let mut t = PhaseTable::new(doc.targets);
        for term in doc.terms {
            t.insert(&term.subset, term.phase)?;
        }
        Ok(t)
    }
}

impl From<PhaseTable> for PhaseTableDoc {
    fn from(t: PhaseTable) -> Self {
        PhaseTableDoc {
            targets: t.n,
            terms: t
                .entries
                .into_iter()
                .map(|(subset, phase)| PhaseTerm { subset, phase })
                .collect(),
        }
    }
}

impl PhaseTable {
    pub fn new(n: usize) -> Self {
        PhaseTable {
            n,
            entries: Vec::new(),
        }
    }

    pub fn targets(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(Vec<usize>, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Add a term; the subset is stored sorted and may appear only once.
    pub fn insert(&mut self, subset: &[usize], phase: f64) -> Result<()> {
        check_subset(subset, self.n)?;
        if !phase.is_finite() {
            return Err(Error::InvalidArgument("phase must be finite".into()));
        }
        let mut s = subset.to_vec();
        s.sort_unstable();
        if self.entries.iter().any(|(k, _)| *k == s) {
            return Err(Error::InvalidArgument(format!("subset {s:?} listed twice")));
        }
        self.entries.push((s, phase));
        Ok(())
    }

    pub fn with(mut self, subset: &[usize], phase: f64) -> Result<Self> {
        self.insert(subset, phase)?;
        Ok(self)
    }

    /// Terms that turn `|+>^n` into `sum_b exp(i theta_b) |b>` up to a global
    /// phase; `thetas` is indexed by basis string.
    pub fn from_basis_phases(n: usize, thetas: &[f64]) -> Result<Self> {
        if thetas.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} phases for {n} targets",
                thetas.len()
            )));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("phase must be finite".into()));
        }
        let mut t = PhaseTable::new(n);
        for mask in 1usize..1 << n {
            let omega = -thetas
                .iter()
                .enumerate()
                .map(|(b, th)| th * parity_sign(b, mask))
                .sum::<f64>()
                / (1u64 << n) as f64;
            if omega.abs() > 1e-15 {
                let subset: Vec<usize> = (0..n).filter(|j| mask >> (n - 1 - j) & 1 == 1).collect();
                t.insert(&subset, omega)?;
            }
        }
        Ok(t)
    }

    /// Phase picked up by each basis string, `-sum_S omega_S prod_S z`.
    pub fn basis_phases(&self) -> Vec<f64> {
        let n = self.n;
        (0..1usize << n)
            .map(|b| {
                -self
                    .entries
                    .iter()
                    .map(|(s, w)| w * parity_sign(b, subset_mask(s, n)))
                    .sum::<f64>()
            })
            .collect()
    }

    /// The terms applied directly to `psi`.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch("phase table and state sizes differ".into()));
        }
        let ph = self.basis_phases();
        let amps = psi
            .amplitudes()
            .iter()
            .zip(&ph)
            .map(|(a, p)| a * Complex64::from_polar(1.0, *p))
            .collect();
        PureState::from_amplitudes(psi.register(), amps)
    }
}

fn subset_mask(subset: &[usize], n: usize) -> usize {
    subset.iter().fold(0, |m, &j| m | 1 << (n - 1 - j))
}

/// `prod_{j in mask} z_j(b)` with `z = +1` for bit 0.
fn parity_sign(b: usize, mask: usize) -> f64 {
    if (b & mask).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Every term of `table` by its own gate sequence.
pub fn diagonal_state_synthesis(e: &mut Engine<'_>, table: &PhaseTable) -> Result<()> {
    if table.targets() != e.n_targets() {
        return Err(Error::DimensionMismatch("phase table and device sizes differ".into()));
    }
    if table.len() >= 1 << table.targets() {
        return Err(Error::InvalidArgument("more terms than non-empty subsets".into()));
    }
    for (s, w) in table.entries() {
        gate_sequence_multi_z(e, s, *w)?;
    }
    e.trace_mut().synthesis_terms = Some(table.len());
    Ok(())
}

/// Product of CZ over every pair in `subset`: couple from `|+_L>`, read the
/// logical qubit out in the eigenbasis of the nested-commutator Pauli, and
/// fix the odd branch with `Z` on every member.
pub fn measurement_cz(e: &mut Engine<'_>, subset: &[usize]) -> Result<Outcome> {
    let n = e.n_targets();
    check_subset(subset, n)?;
    e.prepare(PLUS_X)?;
    let d = InteractionPattern::indicator(n, subset)?;
    e.couple_max(&d, FRAC_PI_4, FlipCategory::Entangling)?;
    let g = nested_commutator_pauli(subset.len() - 1);
    let basis = MeasurementBasis::new(g.eigenvector(1), g.eigenvector(-1))?;
    let outcome = e.measure(&basis, &g.to_string())?;
    if outcome == Outcome::Minus {
        e.correct_z(subset)?;
    }
    Ok(outcome)
}

/// Simple graph on `n` vertices.
pub fn check_edges(edges: &[(usize, usize)], n: usize) -> Result<()> {
    for (k, &(a, b)) in edges.iter().enumerate() {
        if a == b {
            return Err(Error::InvalidArgument(format!("self-loop on vertex {a}")));
        }
        if a >= n || b >= n {
            return Err(Error::QubitOutOfRange { index: a.max(b), len: n });
        }
        if edges[..k].iter().any(|&(c, d)| (c, d) == (a, b) || (c, d) == (b, a)) {
            return Err(Error::InvalidArgument(format!("edge {a}-{b} listed twice")));
        }
    }
    Ok(())
}

/// One measured CZ per edge.
pub fn graph_state_prep(e: &mut Engine<'_>, edges: &[(usize, usize)]) -> Result<()> {
    check_edges(edges, e.n_targets())?;
    for &(a, b) in edges {
        measurement_cz(e, &[a, b])?;
    }
    e.trace_mut().graph_edges = Some(edges.len());
    Ok(())
}

/// `prod CZ |+>^n` over `edges`.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Result<PureState> {
    check_edges(edges, n)?;
    let mut s = PureState::plus(target_register(n))?;
    for &(a, b) in edges {
        s.apply_cz(a, b)?;
    }
    Ok(s)
}

/// `<X_i prod_{j ~ i} Z_j>` for every vertex.
pub fn graph_stabilizers(rho: &MixedState, edges: &[(usize, usize)]) -> Result<Vec<f64>> {
    let n = rho.qubits();
    check_edges(edges, n)?;
    let bit = |j: usize| 1usize << (n - 1 - j);
    let m = rho.matrix();
    Ok((0..n)
        .map(|i| {
            let x = bit(i);
            let z = edges.iter().fold(0, |acc, &(a, b)| {
                if a == i {
                    acc | bit(b)
                } else if b == i {
                    acc | bit(a)
                } else {
                    acc
                }
            });
            (0..1usize << n)
                .map(|a| m[(a, a ^ x)].re * parity_sign(a ^ x, z))
                .sum()
        })
        .collect())
}

/// GHZ over `order` by repeated Bell-type measurements with the first
/// listed qubit. Returns the recorded spins `s` (first entry `+1`): the
/// listed qubits end in `(|s> + |-s>)/sqrt 2`.
pub fn df_ghz_prep(e: &mut Engine<'_>, order: &[usize]) -> Result<Vec<i8>> {
    let n = e.n_targets();
    if order.len() < 2 {
        return Err(Error::InvalidArgument("need at least two targets".into()));
    }
    check_subset(order, n)?;
    let first = order[0];
    let mut spins = vec![1i8];
    for &k in &order[1..] {
        e.prepare(PLUS_X)?;
        let d = InteractionPattern::indicator(n, &[first, k])?;
        e.couple_max(&d, FRAC_PI_4, FlipCategory::Entangling)?;
        match e.measure(&MeasurementBasis::x(), "+X")? {
            Outcome::Plus => spins.push(-1),
            Outcome::Minus => {
                spins.push(1);
                e.correct_z(&[first])?;
            }
        }
    }
    Ok(spins)
}

/// `(|s> + |-s>)/sqrt 2` on the qubits of `order`, `|+>` elsewhere.
pub fn ghz_state(n: usize, order: &[usize], spins: &[i8]) -> Result<PureState> {
    check_subset(order, n)?;
    if spins.len() != order.len() {
        return Err(Error::DimensionMismatch("one spin per listed qubit".into()));
    }
    let mut b = 0usize;
    for (&q, &s) in order.iter().zip(spins) {
        if s < 0 {
            b |= 1 << (n - 1 - q);
        }
    }
    let mask = subset_mask(order, n);
    let rest: Vec<usize> = (0..n).filter(|q| !order.contains(q)).collect();
    let w = Complex64::from(1.0 / ((2u64 << rest.len()) as f64).sqrt());
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for r in 0..1usize << rest.len() {
        let spread = rest
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &q)| if r >> (rest.len() - 1 - k) & 1 == 1 { acc | 1 << (n - 1 - q) } else { acc });
        amps[b | spread] += w;
        amps[(b ^ mask) | spread] += w;
    }
    PureState::from_amplitudes(target_register(n), amps)
}

/// Orientation `c` in `{-1, 1}^N` whose pattern is `s * indicator(subset)`
/// with the largest `s > 0`.
pub fn equal_orientation(f: &crate::geometry::CouplingMatrix, subset: &[usize]) -> Result<(Vec<i8>, f64)> {
    let n = f.n_controls();
    let m = f.n_targets();
    check_subset(subset, m)?;
    if n > 20 {
        return Err(Error::ResourceCap { requested: n, cap: 20 });
    }
    let mut best: Option<(Vec<i8>, f64)> = None;
    for mask in 0usize..1 << n {
        let c: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let lam = f.pattern(&c);
        let s = lam[subset[0]];
        let scale = lam.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-300);
        let ok = s > 1e-12
            && lam
                .iter()
                .enumerate()
                .all(|(j, x)| (x - if subset.contains(&j) { s } else { 0.0 }).abs() <= 1e-9 * scale);
        if ok && best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((c.iter().map(|&x| x as i8).collect(), s));
        }
    }
    best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no orientation of the control register couples targets {subset:?} equally and nothing else"
        ))
    })
}

/// Field and duration that give the pair phase `phi` with coupling `lambda`.
pub fn control_rotation_parameters(phi: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("phase {phi} outside (0, pi/2)")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("coupling {lambda} must be positive")));
    }
    let r = 1.0 - 2.0 * phi / PI;
    let omega = 2.0 * lambda * r / (1.0 - r * r).sqrt();
    let tau = PI * r / omega;
    Ok((omega, tau))
}

/// `exp(-i phi Z_a Z_b)` from a constant transverse field on the logical
/// qubit while it couples equally to `a` and `b`. `trotter_steps` switches
/// to alternating coupling and logical rotations.
pub fn control_rotation_entangler(
    e: &mut Engine<'_>,
    pair: (usize, usize),
    phi: f64,
    trotter_steps: Option<usize>,
) -> Result<()> {
    let (a, b) = pair;
    if a == b {
        return Err(Error::InvalidArgument("pair needs two distinct targets".into()));
    }
    let (signs, lambda) = equal_orientation(e.device().couplings(), &[a, b])?;
    let (omega, tau) = control_rotation_parameters(phi, lambda)?;
    e.prepare(PLUS_X)?;
    e.orient(&signs)?;
    match trotter_steps {
        None => e.control_field(omega, tau),
        Some(k) => e.control_field_trotter(omega, tau, k),
    }
}

/// `exp(-i pi/4 (Z1 Z2 + Z1 Z3 + Z2 Z3))` on three equally coupled targets.
pub fn control_rotation_three_qubit(e: &mut Engine<'_>, triple: [usize; 3]) -> Result<()> {
    let (signs, lambda) = equal_orientation(e.device().couplings(), &triple)?;
    let (omega, tau) = three_qubit_parameters(lambda);
    e.prepare(PLUS_X)?;
    e.orient(&signs)?;
    e.control_field(omega, tau)
}

/// `(omega, tau)` for the three-qubit rotation at coupling `lambda`.
pub fn three_qubit_parameters(lambda: f64) -> (f64, f64) {
    let omega = lambda * 5f64.sqrt() / 3f64.sqrt();
    let tau = 3f64.sqrt() * PI / (2.0 * 2f64.sqrt() * lambda);
    (omega, tau)
}

/// Bell pair from `Z_L Z_a`, then `Y_L Z_b`, then `Z_L Z_a`, each at angle
/// `pi/4`; the `Y` coupling conjugates a `Z` coupling by logical X rotations.
pub fn alternating_pattern_bell(e: &mut Engine<'_>, pair: (usize, usize), middle: f64) -> Result<()> {
    let (a, b) = pair;
    if a == b {
        return Err(Error::InvalidArgument("pair needs two distinct targets".into()));
    }
    let n = e.n_targets();
    check_subset(&[a, b], n)?;
    e.prepare(PLUS_X)?;
    let da = InteractionPattern::indicator(n, &[a])?;
    let db = InteractionPattern::indicator(n, &[b])?;
    e.couple_max(&da, FRAC_PI_4, FlipCategory::Entangling)?;
    if middle != 0.0 {
        y_coupling(e, &db, middle)?;
    }
    e.couple_max(&da, FRAC_PI_4, FlipCategory::Entangling)?;
    Ok(())
}

/// `exp(-i angle Y_L sum_j d_j Z_j)` at maximal strength.
fn y_coupling(e: &mut Engine<'_>, d: &InteractionPattern, angle: f64) -> Result<()> {
    e.logical_x(FRAC_PI_4)?;
    e.couple_max(d, angle, FlipCategory::Entangling)?;
    e.logical_x(-FRAC_PI_4)
}

/// `(|0 0_y> - i |1 1_y>)/sqrt 2` on `(a, b)`, `|+>` elsewhere.
pub fn alternating_bell_state(n: usize, pair: (usize, usize)) -> Result<PureState> {
    let (a, b) = pair;
    check_subset(&[a, b], n)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let y0 = [Complex64::from(h), i * h];
    let y1 = [Complex64::from(h), -i * h];
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let rest: Vec<usize> = (0..n).filter(|&q| q != a && q != b).collect();
    let w = Complex64::from(1.0 / ((1u64 << rest.len()) as f64).sqrt());
    for (idx, amp) in amps.iter_mut().enumerate() {
        let bit = |q: usize| idx >> (n - 1 - q) & 1;
        let pair_amp = if bit(a) == 0 { y0[bit(b)] * h } else { -i * y1[bit(b)] * h };
        *amp = pair_amp * w;
    }
    PureState::from_amplitudes(target_register(n), amps)
}

/// Group-commutator cycles of `X_L sum lambda Z` and `Y_L sum mu Z`, with
/// the control starting in `|0_L>`. Per cycle each factor has angle
/// `sqrt(t / k)`.
pub fn commutator_three_body(
    e: &mut Engine<'_>,
    lambda: &InteractionPattern,
    mu: &InteractionPattern,
    t: f64,
    k: usize,
) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("cycle count must be positive".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("time must be non-negative, got {t}")));
    }
    let n = e.n_targets();
    if lambda.len() != n || mu.len() != n {
        return Err(Error::DimensionMismatch("pattern length differs from target count".into()));
    }
    e.reset_control()?;
    if t == 0.0 {
        return Ok(());
    }
    let s = (t / k as f64).sqrt();
    let h = crate::pauli::hadamard();
    for _ in 0..k {
        // exp(-i s H2), exp(-i s H1), exp(+i s H2), exp(+i s H1) in time order.
        for (axis, sign) in [(PauliAxis::Y, 1.0), (PauliAxis::X, 1.0), (PauliAxis::Y, -1.0), (PauliAxis::X, -1.0)] {
            match axis {
                PauliAxis::X => {
                    e.logical_unitary(&h, "H")?;
                    e.couple_pattern(lambda, sign * s, FlipCategory::Entangling)?;
                    e.logical_unitary(&h, "H")?;
                }
                _ => {
                    e.logical_x(FRAC_PI_4)?;
                    e.couple_pattern(mu, sign * s, FlipCategory::Entangling)?;
                    e.logical_x(-FRAC_PI_4)?;
                }
            }
        }
    }
    Ok(())
}

/// Effective `Z_a Z_b` rate read from the phases of a two-target state that
/// started in `|++>`: `arg(psi00 psi11 / (psi01 psi10)) = -4 J t`.
pub fn fit_zz_rate(psi: &PureState, t: f64) -> Result<f64> {
    if psi.num_qubits() != 2 {
        return Err(Error::DimensionMismatch("rate fit needs a two-qubit state".into()));
    }
    let a = psi.amplitudes();
    let r = a[0] * a[3] / (a[1] * a[2]);
    Ok(-r.arg() / (4.0 * t))
}

/// Free evolution for `time`, then one gate sequence per coupled pair that
/// undoes its accumulated phase. Without `modular`, a phase that cannot be
/// undone by a rotation of at most `pi/2` is an error.
pub fn self_interaction_cancellation(e: &mut Engine<'_>, time: f64, modular: bool) -> Result<()> {
    let n = e.n_targets();
    let fs: DMatrix<f64> = e.device().self_couplings().target.clone();
    let mut corrections = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let phase = fs[(a, b)] * time;
            if phase == 0.0 {
                continue;
            }
            if !modular && phase.abs() > FRAC_PI_2 {
                return Err(Error::Infeasible(format!(
                    "pair ({a}, {b}) accumulates phase {phase:.4}, beyond a single correction"
                )));
            }
            corrections.push(((a, b), reduce_phase(-phase)));
        }
    }
    e.idle(time)?;
    for ((a, b), w) in corrections {
        gate_sequence_multi_z(e, &[a, b], w)?;
    }
    Ok(())
}

/// Representative of `w` modulo `pi` in `(-pi/2, pi/2]`.
pub fn reduce_phase(w: f64) -> f64 {
    let r = w.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

/// `exp(-i omega prod_S Z)` applied directly.
pub fn multi_z_target(psi: &PureState, subset: &[usize], omega: f64) -> Result<PureState> {
    PhaseTable::new(psi.num_qubits()).with(subset, omega)?.apply(psi)
}

/// `exp(-i phi sum_{pairs} Z Z)` applied directly.
pub fn zz_target(psi: &PureState, pairs: &[(usize, usize)], phi: f64) -> Result<PureState> {
    let mut t = PhaseTable::new(psi.num_qubits());
    for &(a, b) in pairs {
        t.insert(&[a, b], phi)?;
    }
    t.apply(psi)
}
