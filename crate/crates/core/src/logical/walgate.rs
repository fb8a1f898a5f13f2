//! Two-outcome logical measurement by sequential single-qubit measurements.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulator::{MeasurementBasis, Outcome, PureState};

const SUPPORT_TOL: f64 = 1e-12;

/// `alpha |x> + beta |~x>` on the control register, `~x` the complement of `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Decomposed {
    x: usize,
    alpha: Complex64,
    beta: Complex64,
}

fn decompose(psi: &PureState, hint: Option<usize>) -> Result<Decomposed> {
    let n = psi.num_qubits();
    let full = (1usize << n) - 1;
    let amps = psi.amplitudes();
    let support: Vec<usize> = (0..amps.len()).filter(|&b| amps[b].norm() > SUPPORT_TOL).collect();
    let x = match (support.as_slice(), hint) {
        (_, Some(h)) => h,
        ([a], None) => *a,
        ([a, b], None) if a ^ b == full => (*a).min(*b),
        _ => {
            return Err(Error::InvalidArgument(
                "state is not confined to a pair of complementary basis states".into(),
            ))
        }
    };
    let xc = x ^ full;
    if support.iter().any(|&b| b != x && b != xc) {
        return Err(Error::InvalidArgument(
            "measurement states do not share a logical subspace".into(),
        ));
    }
    Ok(Decomposed {
        x,
        alpha: amps[x],
        beta: if xc == x { Complex64::new(0.0, 0.0) } else { amps[xc] },
    })
}

/// How intermediate and final outcomes are chosen.
pub enum Branch<'a, R: Rng + ?Sized> {
    Random(&'a mut R),
    /// Final outcome fixed; intermediate outcomes take the likelier branch.
    Forced(Outcome),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalgateResult {
    /// `Plus` means the state was found in `psi`, `Minus` in `psi_perp`.
    pub outcome: Outcome,
    pub probability: f64,
    pub local_outcomes: Vec<Outcome>,
}

struct Plan {
    controls: Vec<usize>,
    bits: Vec<u8>,
    alpha: Complex64,
    beta: Complex64,
    z_only: bool,
}

fn plan(controls: &[usize], psi: &PureState, psi_perp: &PureState) -> Result<Plan> {
    let n = controls.len();
    if n == 0 || psi.num_qubits() != n || psi_perp.num_qubits() != n {
        return Err(Error::DimensionMismatch(
            "measurement states must span the listed control qubits".into(),
        ));
    }
    let ip = psi.inner(psi_perp)?;
    if ip.norm() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "measurement states are not orthogonal (overlap {:.3e})",
            ip.norm()
        )));
    }
    let d = decompose(psi, None).or_else(|_| {
        let p = decompose(psi_perp, None)?;
        decompose(psi, Some(p.x))
    })?;
    decompose(psi_perp, Some(d.x))?;
    let bits = (0..n).map(|q| ((d.x >> (n - 1 - q)) & 1) as u8).collect();
    Ok(Plan {
        controls: controls.to_vec(),
        bits,
        alpha: d.alpha,
        beta: d.beta,
        z_only: d.alpha.norm() < SUPPORT_TOL || d.beta.norm() < SUPPORT_TOL,
    })
}

/// `<m|bit>` for an X-basis outcome.
fn x_overlap(m: Outcome, bit: u8) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match (m, bit) {
        (Outcome::Minus, 1) => -s,
        _ => s,
    }
}

/// Basis on the last qubit whose first vector carries `psi`.
fn final_basis(bit: u8, alpha: Complex64, beta: Complex64) -> Result<MeasurementBasis> {
    let v = if bit == 0 { [alpha, beta] } else { [beta, alpha] };
    MeasurementBasis::from_vector(v)
}

fn run<R: Rng + ?Sized>(
    state: &mut PureState,
    p: &Plan,
    branch: &mut Branch<'_, R>,
    intermediate: Option<&[Outcome]>,
) -> Result<WalgateResult> {
    let n = p.controls.len();
    let mut locals = Vec::with_capacity(n);
    let mut prob = 1.0;
    let pick = |state: &PureState, q: usize, basis: &MeasurementBasis, branch: &mut Branch<'_, R>, fixed: Option<Outcome>| -> Result<Outcome> {
        if let Some(o) = fixed {
            return Ok(o);
        }
        let p_plus = state.probability(q, &basis.vector(Outcome::Plus))?;
        Ok(match branch {
            Branch::Random(rng) => {
                if rng.gen::<f64>() < p_plus {
                    Outcome::Plus
                } else {
                    Outcome::Minus
                }
            }
            Branch::Forced(_) => {
                if p_plus >= 0.5 {
                    Outcome::Plus
                } else {
                    Outcome::Minus
                }
            }
        })
    };
    if p.z_only {
        // Only one basis state (and its complement) is involved: Z readout of
        // the first qubit decides; the rest follow deterministically.
        let zb = MeasurementBasis::z();
        let psi_bit = if p.alpha.norm() >= SUPPORT_TOL { p.bits[0] } else { 1 - p.bits[0] };
        let first = match branch {
            Branch::Forced(o) => {
                let want = if *o == Outcome::Plus { psi_bit } else { 1 - psi_bit };
                if want == 0 { Outcome::Plus } else { Outcome::Minus }
            }
            _ => pick(state, p.controls[0], &zb, branch, None)?,
        };
        prob *= state.measure_forced(p.controls[0], &zb, first)?;
        locals.push(first);
        for &q in &p.controls[1..] {
            let o = pick(state, q, &zb, branch, None)?;
            prob *= state.measure_forced(q, &zb, o)?;
            locals.push(o);
        }
        let found = if first == Outcome::Plus { 0 } else { 1 };
        let outcome = if found == psi_bit { Outcome::Plus } else { Outcome::Minus };
        return Ok(WalgateResult {
            outcome,
            probability: prob,
            local_outcomes: locals,
        });
    }
    let (mut alpha, mut beta) = (p.alpha, p.beta);
    let xb = MeasurementBasis::x();
    for (k, &q) in p.controls[..n - 1].iter().enumerate() {
        let fixed = intermediate.map(|v| v[k]);
        let o = pick(state, q, &xb, branch, fixed)?;
        prob *= state.measure_forced(q, &xb, o)?;
        alpha *= x_overlap(o, p.bits[k]);
        beta *= x_overlap(o, 1 - p.bits[k]);
        locals.push(o);
    }
    let last = p.controls[n - 1];
    let basis = final_basis(p.bits[n - 1], alpha, beta)?;
    let outcome = match branch {
        Branch::Forced(o) => *o,
        _ => pick(state, last, &basis, branch, None)?,
    };
    prob *= state.measure_forced(last, &basis, outcome)?;
    locals.push(outcome);
    Ok(WalgateResult {
        outcome,
        probability: prob,
        local_outcomes: locals,
    })
}

/// Distinguish `psi` from `psi_perp` (states of the qubits `controls`) with
/// one single-qubit measurement per qubit. Both states must lie in a common
/// `span{|x>, |~x>}`. The remaining register collapses exactly as under the
/// ideal two-outcome projective measurement.
pub fn walgate_measurement<R: Rng + ?Sized>(
    state: &mut PureState,
    controls: &[usize],
    psi: &PureState,
    psi_perp: &PureState,
    mut branch: Branch<'_, R>,
) -> Result<WalgateResult> {
    let p = plan(controls, psi, psi_perp)?;
    run(state, &p, &mut branch, None)
}

/// Exact outcome probabilities `(p_psi, p_perp)` by enumerating every
/// intermediate branch.
pub fn walgate_probabilities(
    state: &PureState,
    controls: &[usize],
    psi: &PureState,
    psi_perp: &PureState,
) -> Result<(f64, f64)> {
    let p = plan(controls, psi, psi_perp)?;
    let n = controls.len();
    let mut totals = [0.0, 0.0];
    let strings: Vec<Vec<Outcome>> = if p.z_only {
        vec![Vec::new()]
    } else {
        (0..1usize << (n - 1))
            .map(|m| {
                (0..n - 1)
                    .map(|k| if (m >> k) & 1 == 0 { Outcome::Plus } else { Outcome::Minus })
                    .collect()
            })
            .collect()
    };
    for s in &strings {
        for (i, o) in [Outcome::Plus, Outcome::Minus].into_iter().enumerate() {
            let mut trial = state.clone();
            let mut br: Branch<'_, rand::rngs::mock::StepRng> = Branch::Forced(o);
            match run(&mut trial, &p, &mut br, (!p.z_only).then_some(s.as_slice())) {
                Ok(r) => totals[i] += r.probability,
                Err(Error::ZeroProbabilityBranch) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok((totals[0], totals[1]))
}

/// `a |x> + b |~x>` on `n` qubits.
pub fn logical_state(n: usize, x: usize, a: Complex64, b: Complex64) -> Result<PureState> {
    let full = (1usize << n) - 1;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[x] += a;
    amps[x ^ full] += b;
    PureState::from_amplitudes(crate::simulator::Register::Physical { controls: n, targets: 0 }, amps)
}
