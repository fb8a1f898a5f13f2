use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::geometry::{CouplingMatrix, SelfCouplings};
use crate::pattern::Frame;
use crate::pauli::{self, Mat2};
use crate::simulator::{DiagonalHamiltonian, Outcome, PureState, Register};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_state(reg: Register, rng: &mut ChaCha8Rng) -> PureState {
    let amps: Vec<Complex64> = (0..1usize << reg.qubits())
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::from_amplitudes(reg, amps.into_iter().map(|a| a / n).collect()).unwrap()
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a + 1..n {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let v = sign * rng.gen_range(0.3..1.5);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    m
}

fn control_hamiltonian(reg: Register, fc: &DMatrix<f64>) -> DiagonalHamiltonian {
    let sc = SelfCouplings {
        control: fc.clone(),
        target: DMatrix::zeros(reg.n_targets(), reg.n_targets()),
    };
    DiagonalHamiltonian::self_interaction(reg, &sc, true, false).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Mat2 {
    let g = Complex64::from_polar(1.0, rng.gen_range(-3.0..3.0));
    pauli::rotation(PauliAxis::Z, rng.gen_range(-3.0..3.0))
        * pauli::rotation(PauliAxis::Y, rng.gen_range(-3.0..3.0))
        * pauli::rotation(PauliAxis::Z, rng.gen_range(-3.0..3.0))
        * g
}

fn undo_frame(s: &mut PureState, frame: &Frame) {
    for (q, &sg) in frame.signs().iter().enumerate() {
        if sg < 0 {
            s.apply_x(q).unwrap();
        }
    }
}

#[test]
fn nested_commutators_cycle_with_period_four() {
    let i = c(0.0, 1.0);
    let z = PauliAxis::Z.matrix();
    let mut g = PauliAxis::X.matrix();
    for k in 0..12 {
        let want = nested_commutator_pauli(k).matrix();
        assert!((g - want).iter().all(|e| e.norm() < 1e-14), "k = {k}");
        g = (g * z - z * g) * (i / 2.0);
    }
    assert_eq!(nested_commutator_pauli(1), SignedPauli { sign: 1, axis: PauliAxis::Y });
    assert_eq!(nested_commutator_pauli(2), SignedPauli { sign: -1, axis: PauliAxis::X });
}

#[test]
fn decoupling_flip_counts() {
    for (n, want) in [(2, 4), (4, 12), (8, 40)] {
        let d = decoupling_schedule(n, 1.0).unwrap();
        assert_eq!(d.flip_count(), want, "n = {n}");
    }
    assert!(decoupling_schedule(1, 1.0).is_err());
    assert!(decoupling_schedule(4, 0.0).is_err());
}

#[test]
fn decoupling_cancels_internal_couplings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2usize, 3, 4, 5, 8] {
        for _ in 0..20 {
            let reg = Register::Physical { controls: n, targets: 0 };
            let fc = random_symmetric(n, &mut rng);
            let h = control_hamiltonian(reg, &fc);
            let d = decoupling_schedule(n, rng.gen_range(0.1..1.0)).unwrap();
            let start = random_state(reg, &mut rng);
            let mut s = start.clone();
            s.run_flip_schedule(&h, &d.schedule).unwrap();
            undo_frame(&mut s, d.schedule.terminal_frame());
            assert!((s.overlap(&start).unwrap() - 1.0).abs() < 1e-10, "n = {n}");
        }
    }
}

#[test]
fn single_global_flip_misses_one_code() {
    // With 2^k qubits the qubit coded 1..10 keeps a net orientation.
    for n in [2usize, 4, 8] {
        let d = decoupling_schedule(n, 1.0).unwrap();
        assert!(!d.cancels_external, "n = {n}");
        let v = d.schedule.effective_vector();
        assert_eq!(v.iter().filter(|x| x.abs() > 1e-12).count(), 1);
    }
}

#[test]
fn halving_codes_are_distinct() {
    for groups in 1..20usize {
        let levels = if groups <= 1 { 0 } else { (groups as f64).log2().ceil() as usize };
        let codes = halving_codes(groups, levels);
        for a in 0..groups {
            for b in a + 1..groups {
                assert_ne!(codes[a], codes[b]);
            }
        }
    }
}

#[test]
fn pair_isolation_keeps_only_the_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2usize, 3, 4, 5, 6] {
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let reg = Register::Physical { controls: n, targets: 2 };
                let fc = random_symmetric(n, &mut rng);
                let f = CouplingMatrix::from_matrix(DMatrix::from_fn(2, n, |_, _| rng.gen_range(-1.0..1.0))).unwrap();
                let mut h = control_hamiltonian(reg, &fc);
                h.extend(&DiagonalHamiltonian::control_target(reg, &f).unwrap()).unwrap();
                let iso = pair_isolation_schedule(n, (a, b), rng.gen_range(0.1..0.5)).unwrap();
                assert_eq!(iso.schedule.terminal_frame(), &Frame::up(n));
                let start = random_state(reg, &mut rng);
                let mut s = start.clone();
                s.run_flip_schedule(&h, &iso.schedule).unwrap();
                let pair = DiagonalHamiltonian::new(n + 2).with_term(fc[(a, b)], &[a, b]).unwrap();
                let mut want = start;
                want.evolve_diagonal(&pair, iso.effective_time()).unwrap();
                assert!((s.overlap(&want).unwrap() - 1.0).abs() < 1e-10, "n = {n}, pair ({a}, {b})");
                assert!((pair_average(&iso.schedule, a, b) - 1.0).abs() < 1e-12);
            }
        }
    }
    assert!(pair_isolation_schedule(3, (1, 1), 1.0).is_err());
    assert!(pair_isolation_schedule(3, (0, 3), 1.0).is_err());
}

#[test]
fn pair_phase_scales_with_segment_time() {
    let a = pair_isolation_schedule(4, (0, 2), 0.2).unwrap();
    let b = pair_isolation_schedule(4, (0, 2), 0.6).unwrap();
    assert!((b.effective_time() / a.effective_time() - 3.0).abs() < 1e-12);
    assert_eq!(a.schedule.flip_count(), b.schedule.flip_count());
}

#[test]
fn two_qubit_pair_isolation_is_two_global_flips() {
    let iso = pair_isolation_schedule(2, (0, 1), 1.0).unwrap();
    assert_eq!(iso.schedule.flip_count(), 4);
    assert_eq!(iso.schedule.duration(), 1.0);
}

#[test]
fn compiled_cx_matches_ideal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2usize, 3, 4] {
        let reg = Register::Physical { controls: n, targets: 0 };
        let fc = random_symmetric(n, &mut rng);
        let h = control_hamiltonian(reg, &fc);
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let mut ideal = GateCircuit::new(n);
                ideal.push(Gate::Cx { control: a, target: b }).unwrap();
                let compiled = ideal.compile(&fc).unwrap();
                assert_eq!(compiled.cx_count(), 0);
                let want_t = cx_pair_time(fc[(a, b)]).unwrap();
                assert!((compiled.duration() - want_t).abs() < 1e-12);
                let start = random_state(reg, &mut rng);
                let mut s = start.clone();
                compiled.run(&mut s, &h).unwrap();
                let mut want = start;
                want.apply_cx(a, b).unwrap();
                assert!((s.overlap(&want).unwrap() - 1.0).abs() < 1e-10, "n = {n}, ({a}, {b})");
            }
        }
    }
}

#[test]
fn cx_rejects_zero_coupling() {
    assert!(cx_pair_time(0.0).is_err());
    assert!((cx_pair_time(-1.0).unwrap() - 3.0 * FRAC_PI_4).abs() < 1e-15);
}

fn logical(n: usize, a: Complex64, b: Complex64) -> PureState {
    logical_state(n, 0, a, b).unwrap()
}

#[test]
fn hadamard_gate_makes_bell_pair() {
    let fc = DMatrix::from_row_slice(2, 2, &[0.0, 0.8, 0.8, 0.0]);
    let reg = Register::Physical { controls: 2, targets: 0 };
    let circ = logical_gate_circuit(&pauli::hadamard(), 2).unwrap().compile(&fc).unwrap();
    let mut s = PureState::zero(reg).unwrap();
    circ.run(&mut s, &control_hamiltonian(reg, &fc)).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((s.overlap(&logical(2, c(h, 0.0), c(h, 0.0))).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn identity_gate_is_identity_on_logical_subspace() {
    let fc = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.3, 1.0, 0.0, -0.7, 0.3, -0.7, 0.0]);
    let reg = Register::Physical { controls: 3, targets: 0 };
    let circ = logical_gate_circuit(&pauli::identity(), 3).unwrap().compile(&fc).unwrap();
    let start = logical(3, c(0.6, 0.0), c(0.0, 0.8));
    let mut s = start.clone();
    circ.run(&mut s, &control_hamiltonian(reg, &fc)).unwrap();
    assert!((s.overlap(&start).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn plus_preparation() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = logical_plus_prep_circuit(1).unwrap();
    assert_eq!(one.gates.len(), 1);
    assert_eq!(one.cx_count(), 0);
    let fc = DMatrix::from_row_slice(3, 3, &[0.0, 0.5, 0.2, 0.5, 0.0, 0.9, 0.2, 0.9, 0.0]);
    let reg = Register::Physical { controls: 3, targets: 0 };
    let prep = logical_plus_prep_circuit(3).unwrap();
    assert_eq!(prep.cx_count(), 2);
    let mut s = PureState::zero(reg).unwrap();
    prep.compile(&fc).unwrap().run(&mut s, &control_hamiltonian(reg, &fc)).unwrap();
    assert!((s.overlap(&logical(3, c(h, 0.0), c(h, 0.0))).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn logical_x_rotation_from_two_hadamards() {
    // H Rz(w) H = Rx(w) on the logical qubit.
    let fc = DMatrix::from_row_slice(2, 2, &[0.0, 1.1, 1.1, 0.0]);
    let reg = Register::Physical { controls: 2, targets: 0 };
    let w = 0.37;
    let mut circ = logical_gate_circuit(&pauli::hadamard(), 2).unwrap();
    circ.extend(&logical_z_rotation(&[w, 0.0], &[1.0, 1.0]).unwrap().0).unwrap();
    circ.extend(&logical_gate_circuit(&pauli::hadamard(), 2).unwrap()).unwrap();
    let circ = circ.compile(&fc).unwrap();
    let h = control_hamiltonian(reg, &fc);
    for (a, b) in [(c(1.0, 0.0), c(0.0, 0.0)), (c(0.6, 0.0), c(0.0, 0.8))] {
        let mut s = logical(2, a, b);
        circ.run(&mut s, &h).unwrap();
        let r = pauli::rotation(PauliAxis::X, w);
        let want = logical(2, r[(0, 0)] * a + r[(0, 1)] * b, r[(1, 0)] * a + r[(1, 1)] * b);
        assert!((s.overlap(&want).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn z_rotation_composition_rule() {
    let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
    let th = 0.9;
    let reg = Register::Physical { controls: 2, targets: 0 };
    let h = DiagonalHamiltonian::new(2);
    // Orientation (1, 1), rotation on the first qubit.
    let (circ, total) = logical_z_rotation(&[th, 0.0], &[1.0, 1.0]).unwrap();
    assert!((total - th).abs() < 1e-15);
    let mut s = logical(2, a, b);
    circ.run(&mut s, &h).unwrap();
    let want = logical(2, a * Complex64::from_polar(1.0, -th), b * Complex64::from_polar(1.0, th));
    assert!((s.overlap(&want).unwrap() - 1.0).abs() < 1e-12);
    // Orientation (1, -1): |0_L> = |01>, rotation on the second qubit.
    let (circ, total) = logical_z_rotation(&[0.0, th], &[1.0, -1.0]).unwrap();
    assert!((total + th).abs() < 1e-15);
    let mut s = logical_state(2, 0b01, a, b).unwrap();
    circ.run(&mut s, &h).unwrap();
    let want = logical_state(2, 0b01, a * Complex64::from_polar(1.0, -total), b * Complex64::from_polar(1.0, total))
        .unwrap();
    assert!((s.overlap(&want).unwrap() - 1.0).abs() < 1e-12);
    // No rotation at all.
    let (circ, total) = logical_z_rotation(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
    assert!(circ.gates.is_empty() && total == 0.0);
    assert!(logical_z_rotation(&[0.1], &[0.0]).is_err());
    let _ = reg;
}

#[test]
fn circuit_validation() {
    let mut c2 = GateCircuit::new(2);
    assert!(c2.push(Gate::Cx { control: 0, target: 0 }).is_err());
    assert!(c2.push(Gate::Flip { qubit: 2 }).is_err());
    assert!(c2.push(Gate::Evolve { duration: -1.0 }).is_err());
    let bad = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
    assert!(matches!(Gate::single(0, "bad", &bad), Err(Error::NonUnitary(_))));
    c2.push(Gate::single(1, "H", &pauli::hadamard()).unwrap()).unwrap();
    let json = c2.to_json();
    let back: GateCircuit = serde_json::from_str(&json).unwrap();
    assert_eq!(back, c2);
}

fn entangled_logical_state(x: usize, rng: &mut ChaCha8Rng) -> (PureState, PureState, PureState) {
    // |x>|phi0> + |~x>|phi1> on 3 controls and 2 targets.
    let reg = Register::Physical { controls: 3, targets: 2 };
    let sub = Register::Physical { controls: 0, targets: 2 };
    let p0 = random_state(sub, rng);
    let p1 = random_state(sub, rng);
    let w: f64 = rng.gen_range(0.1..0.9);
    let xc = x ^ 0b111;
    let mut amps = vec![c(0.0, 0.0); 32];
    for s in 0..4 {
        amps[(x << 2) | s] = p0.amplitude(s) * w.sqrt();
        amps[(xc << 2) | s] = p1.amplitude(s) * (1.0 - w).sqrt();
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let amps = amps.into_iter().map(|a| a / norm).collect();
    (PureState::from_amplitudes(reg, amps).unwrap(), p0, p1)
}

#[test]
fn walgate_matches_ideal_projectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let controls = [0usize, 1, 2];
    for trial in 0..20 {
        let x = rng.gen_range(0..8usize);
        let (state, _, _) = entangled_logical_state(x, &mut rng);
        let u = random_unitary(&mut rng);
        let (u0, u1) = (u[(0, 0)], u[(1, 0)]);
        let psi = logical_state(3, x, u0, u1).unwrap();
        let perp = logical_state(3, x, -u1.conj(), u0.conj()).unwrap();
        let ideal = |v: &PureState| -> (f64, Vec<Complex64>) {
            let mut rest = vec![c(0.0, 0.0); 4];
            for cb in 0..8 {
                for s in 0..4 {
                    rest[s] += v.amplitude(cb).conj() * state.amplitude((cb << 2) | s);
                }
            }
            (rest.iter().map(|a| a.norm_sqr()).sum(), rest)
        };
        let (p_psi, s_psi) = ideal(&psi);
        let (p_perp, s_perp) = ideal(&perp);
        let (w_psi, w_perp) = walgate_probabilities(&state, &controls, &psi, &perp).unwrap();
        assert!((w_psi - p_psi).abs() < 1e-10, "trial {trial}");
        assert!((w_perp - p_perp).abs() < 1e-10, "trial {trial}");
        for (o, rest, p) in [(Outcome::Plus, s_psi, p_psi), (Outcome::Minus, s_perp, p_perp)] {
            if p < 1e-9 {
                continue;
            }
            let mut s = state.clone();
            let r = walgate_measurement(&mut s, &controls, &psi, &perp, Branch::<ChaCha8Rng>::Forced(o)).unwrap();
            assert_eq!(r.outcome, o);
            let target = PureState::from_amplitudes(
                Register::Physical { controls: 0, targets: 2 },
                rest.iter().map(|a| a / p.sqrt()).collect(),
            )
            .unwrap();
            assert!((s.fidelity(&target, &[3, 4]).unwrap() - 1.0).abs() < 1e-10, "trial {trial}");
        }
    }
}

#[test]
fn walgate_z_readout_for_basis_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (state, p0, p1) = entangled_logical_state(0b000, &mut rng);
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let psi = logical_state(3, 0, one, zero).unwrap();
    let perp = logical_state(3, 0, zero, one).unwrap();
    let mut s = state.clone();
    let r = walgate_measurement(&mut s, &[0, 1, 2], &psi, &perp, Branch::<ChaCha8Rng>::Forced(Outcome::Minus)).unwrap();
    assert_eq!(r.outcome, Outcome::Minus);
    assert_eq!(r.local_outcomes, vec![Outcome::Minus; 3]);
    assert!((s.fidelity(&p1, &[3, 4]).unwrap() - 1.0).abs() < 1e-12);
    let mut s = state;
    let r = walgate_measurement(&mut s, &[0, 1, 2], &psi, &perp, Branch::Random(&mut rng)).unwrap();
    let want = if r.outcome == Outcome::Plus { &p0 } else { &p1 };
    assert!((s.fidelity(want, &[3, 4]).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn walgate_sampling_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = logical_state(2, 0, c(h, 0.0), c(h, 0.0)).unwrap();
    let perp = logical_state(2, 0, c(h, 0.0), c(-h, 0.0)).unwrap();
    let start = logical_state(2, 0, c(0.8, 0.0), c(0.6, 0.0)).unwrap();
    let (p, _) = walgate_probabilities(&start, &[0, 1], &psi, &perp).unwrap();
    assert!((p - 0.98).abs() < 1e-12);
    let mut hits = 0;
    for _ in 0..4000 {
        let mut s = start.clone();
        if walgate_measurement(&mut s, &[0, 1], &psi, &perp, Branch::Random(&mut rng)).unwrap().outcome == Outcome::Plus {
            hits += 1;
        }
    }
    assert!((hits as f64 / 4000.0 - 0.98).abs() < 0.01);
}

#[test]
fn walgate_rejects_bad_pairs() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = logical_state(2, 0, c(h, 0.0), c(h, 0.0)).unwrap();
    let b = logical_state(2, 0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    let s = a.clone();
    assert!(walgate_probabilities(&s, &[0, 1], &a, &b).is_err());
    let other = logical_state(2, 0b01, c(h, 0.0), c(-h, 0.0)).unwrap();
    assert!(walgate_probabilities(&s, &[0, 1], &a, &other).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn logical_gate_acts_as_v(
        a1 in -3.0f64..3.0, a2 in -3.0f64..3.0, a3 in -3.0f64..3.0, g in -3.0f64..3.0,
        amp in 0.1f64..0.9, ph in -3.0f64..3.0,
    ) {
        let v = pauli::rotation(PauliAxis::Z, a1) * pauli::rotation(PauliAxis::Y, a2)
            * pauli::rotation(PauliAxis::Z, a3) * Complex64::from_polar(1.0, g);
        let fc = DMatrix::from_row_slice(3, 3, &[0.0, 0.9, -0.4, 0.9, 0.0, 1.3, -0.4, 1.3, 0.0]);
        let reg = Register::Physical { controls: 3, targets: 0 };
        let circ = logical_gate_circuit(&v, 3).unwrap().compile(&fc).unwrap();
        let h = control_hamiltonian(reg, &fc);
        let inputs = [
            (c(1.0, 0.0), c(0.0, 0.0)),
            (c(0.0, 0.0), c(1.0, 0.0)),
            (Complex64::from(amp.sqrt()), Complex64::from_polar((1.0 - amp).sqrt(), ph)),
        ];
        for (a, b) in inputs {
            let mut s = logical(3, a, b);
            circ.run(&mut s, &h).unwrap();
            let want = logical(3, v[(0, 0)] * a + v[(0, 1)] * b, v[(1, 0)] * a + v[(1, 1)] * b);
            prop_assert!((s.overlap(&want).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}
