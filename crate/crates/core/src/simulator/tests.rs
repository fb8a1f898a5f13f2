use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::pattern::{compile_flip_schedule_in_frame, Frame};
use crate::pauli::{hadamard, rotation, PauliAxis};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phys(controls: usize, targets: usize) -> Register {
    Register::Physical { controls, targets }
}

#[test]
fn bit_order_is_big_endian() {
    let mut s = PureState::zero(phys(1, 2)).unwrap();
    s.apply_x(0).unwrap();
    assert_eq!(s.amplitude(0b100), c(1.0, 0.0));
    s.apply_x(2).unwrap();
    assert_eq!(s.amplitude(0b101), c(1.0, 0.0));
}

#[test]
fn register_cap_enforced() {
    let r = phys(20, 3);
    assert!(matches!(PureState::zero(r), Err(Error::ResourceCap { requested: 23, cap: 22 })));
}

#[test]
fn diagonal_phase_matches_energy() {
    let r = phys(1, 1);
    let h = DiagonalHamiltonian::new(2).with_term(0.3, &[0, 1]).unwrap();
    let mut s = PureState::plus(r).unwrap();
    s.evolve_diagonal(&h, 2.0).unwrap();
    let e = Complex64::from_polar(0.5, -0.6);
    let o = Complex64::from_polar(0.5, 0.6);
    for (b, want) in [(0, e), (1, o), (2, o), (3, e)] {
        assert!((s.amplitude(b) - want).norm() < 1e-14);
    }
}

#[test]
fn cx_truth_table() {
    for input in 0..4usize {
        let mut s = PureState::basis(phys(1, 1), input).unwrap();
        s.apply_cx(0, 1).unwrap();
        let want = if input & 0b10 != 0 { input ^ 1 } else { input };
        assert_eq!(s.amplitude(want), c(1.0, 0.0));
    }
}

#[test]
fn cz_from_zz_and_local_phases() {
    // exp(-i pi/4 ZZ) with exp(+i pi/4 Z) on each qubit equals CZ up to a phase.
    let r = phys(1, 1);
    let h = DiagonalHamiltonian::new(2)
        .with_term(1.0, &[0, 1])
        .unwrap()
        .with_term(-1.0, &[0])
        .unwrap()
        .with_term(-1.0, &[1])
        .unwrap();
    let mut a = PureState::plus(r).unwrap();
    a.evolve_diagonal(&h, FRAC_PI_4).unwrap();
    let mut b = PureState::plus(r).unwrap();
    b.apply_cz(0, 1).unwrap();
    assert!((a.overlap(&b).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn flip_schedule_realizes_effective_pattern() {
    // Two controls, one target: evolution under the schedule equals the
    // logical pattern sum_i f_i c_i for a control register starting in |00>.
    let r = phys(2, 1);
    let f = crate::geometry::CouplingMatrix::from_matrix(nalgebra::DMatrix::from_row_slice(1, 2, &[1.0, 0.5])).unwrap();
    let h = DiagonalHamiltonian::control_target(r, &f).unwrap();
    let cv = [0.4, -0.6];
    let tau = 1.3;
    let sched = compile_flip_schedule_in_frame(&cv, &Frame::up(2), tau).unwrap();
    let mut s = PureState::plus(phys(2, 1)).unwrap();
    // control in |00>
    s.project(0, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    s.project(1, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    s.run_flip_schedule(&h, &sched).unwrap();
    let lam = 1.0 * 0.4 + 0.5 * -0.6;
    let mut want = PureState::plus(phys(2, 1)).unwrap();
    want.project(0, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    want.project(1, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let hz = DiagonalHamiltonian::new(3).with_term(lam, &[2]).unwrap();
    want.evolve_diagonal(&hz, tau).unwrap();
    // Undo the terminal frame.
    for (i, &sgn) in sched.terminal_frame().signs().iter().enumerate() {
        if sgn < 0 {
            s.apply_x(i).unwrap();
        }
    }
    assert!((s.overlap(&want).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn control_rotation_block_matches_trotter_limit() {
    let r = Register::Logical { targets: 2 };
    let lambdas = [0.7, -0.2];
    let mut exact = PureState::plus(r).unwrap();
    exact.evolve_control_rotation(&lambdas, 0.9, 1.1).unwrap();
    let h = DiagonalHamiltonian::logical_pattern(r, &lambdas).unwrap();
    let mut tro = PureState::plus(r).unwrap();
    tro.trotter_evolve(&[TrotterTerm::Diagonal(h), TrotterTerm::logical_x(0.9)], 1.1, 4000)
        .unwrap();
    assert!((exact.overlap(&tro).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn control_rotation_requires_logical_register() {
    let mut s = PureState::zero(phys(1, 1)).unwrap();
    assert!(matches!(s.evolve_control_rotation(&[1.0], 1.0, 1.0), Err(Error::ModeMismatch(_))));
}

#[test]
fn forced_measurement_probabilities() {
    let mut s = PureState::plus(phys(1, 1)).unwrap();
    let p = s.measure_forced(0, &MeasurementBasis::z(), Outcome::Minus).unwrap();
    assert!((p - 0.5).abs() < 1e-15);
    assert!((s.amplitude(0b10).norm() - FRAC_1_SQRT_2).abs() < 1e-15);
    let p = s.measure_forced(1, &MeasurementBasis::x(), Outcome::Plus).unwrap();
    assert!((p - 1.0).abs() < 1e-15);
    assert!(matches!(
        s.measure_forced(1, &MeasurementBasis::x(), Outcome::Minus),
        Err(Error::ZeroProbabilityBranch)
    ));
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn sampled_measurement_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut plus = 0;
    for _ in 0..4000 {
        let mut s = PureState::zero(phys(1, 0)).unwrap();
        s.apply_single(0, &rotation(PauliAxis::Y, PI / 6.0)).unwrap();
        if s.measure(0, &MeasurementBasis::z(), &mut rng).unwrap() == Outcome::Plus {
            plus += 1;
        }
    }
    // cos^2(pi/6) = 0.75
    assert!((plus as f64 / 4000.0 - 0.75).abs() < 0.03);
}

#[test]
fn bell_state_reduced_density() {
    let mut s = PureState::zero(phys(1, 1)).unwrap();
    s.apply_single(0, &hadamard()).unwrap();
    s.apply_cx(0, 1).unwrap();
    let red = s.reduced_density(&[1]).unwrap();
    assert!((red.purity() - 0.5).abs() < 1e-14);
    assert!((red.entropy_bits() - 1.0).abs() < 1e-12);
    let bell = PureState::from_amplitudes(
        phys(1, 1),
        vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)],
    )
    .unwrap();
    assert!((s.fidelity(&bell, &[0, 1]).unwrap() - 1.0).abs() < 1e-14);
}

#[test]
fn pure_and_mixed_fidelity_agree() {
    let mut s = PureState::plus(phys(1, 2)).unwrap();
    let h = DiagonalHamiltonian::new(3)
        .with_term(0.4, &[0, 1])
        .unwrap()
        .with_term(0.9, &[0, 2])
        .unwrap();
    s.evolve_diagonal(&h, 0.8).unwrap();
    let target = PureState::plus(Register::Physical { controls: 0, targets: 2 }).unwrap();
    let a = s.fidelity(&target, &[1, 2]).unwrap();
    let b = MixedState::from_pure(&s).fidelity(&target, &[1, 2]).unwrap();
    assert!((a - b).abs() < 1e-13);
}

#[test]
fn basis_must_be_orthonormal() {
    assert!(MeasurementBasis::new([c(1.0, 0.0), c(0.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    let b = MeasurementBasis::from_vector([c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
    let w = b.vector(Outcome::Minus);
    assert!((w[0].norm_sqr() + w[1].norm_sqr() - 1.0).abs() < 1e-15);
}

#[test]
fn y_basis_distinguishes_phase() {
    let mut s = PureState::zero(phys(1, 0)).unwrap();
    s.apply_single(0, &rotation(PauliAxis::X, -FRAC_PI_4)).unwrap();
    // exp(+i pi/4 X)|0> = (|0> + i|1>)/sqrt2, the +1 eigenstate of Y.
    let p = s.probability(0, &MeasurementBasis::y().vector(Outcome::Plus)).unwrap();
    assert!((p - 1.0).abs() < 1e-14);
    let _ = FRAC_PI_2;
}

fn arb_state(m: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << m).prop_filter_map("zero", move |v| {
        let amps: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-3 {
            return None;
        }
        PureState::from_amplitudes(phys(1, m - 1), amps.into_iter().map(|a| a / n).collect()).ok()
    })
}

proptest! {
    #[test]
    fn operations_preserve_norm(s in arb_state(3), t in -3.0f64..3.0, w in -2.0f64..2.0, q in 0usize..3) {
        let mut s = s;
        let h = DiagonalHamiltonian::new(3).with_term(w, &[0, 2]).unwrap().with_term(0.3, &[1]).unwrap();
        s.evolve_diagonal(&h, t).unwrap();
        s.apply_single(q, &rotation(PauliAxis::Y, t)).unwrap();
        s.apply_cx(0, (q % 2) + 1).unwrap();
        s.apply_x(q).unwrap();
        prop_assert!(s.is_normalized());
    }

    #[test]
    fn reduced_density_is_valid(s in arb_state(3), k in 0usize..3) {
        let red = s.reduced_density(&[k]).unwrap();
        prop_assert!(red.hermiticity_defect() < 1e-12);
        prop_assert!((red.trace() - 1.0).abs() < 1e-12);
        prop_assert!(red.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(s in arb_state(3), q in 0usize..3, th in 0.0f64..3.0) {
        let b = MeasurementBasis::from_vector([c(th.cos(), 0.0), c(0.0, th.sin())]).unwrap();
        let p = s.probability(q, &b.vector(Outcome::Plus)).unwrap()
            + s.probability(q, &b.vector(Outcome::Minus)).unwrap();
        prop_assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn control_rotation_is_unitary(s in arb_state(3), l1 in -1.0f64..1.0, l2 in -1.0f64..1.0, w in -1.0f64..1.0, t in 0.0f64..4.0) {
        let amps = s.amplitudes().to_vec();
        let mut s = PureState::from_amplitudes(Register::Logical { targets: 2 }, amps).unwrap();
        s.evolve_control_rotation(&[l1, l2], w, t).unwrap();
        prop_assert!(s.is_normalized());
    }
}
