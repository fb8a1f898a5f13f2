//! Gaussian position noise on the target qubits and fidelity estimates of
//! the noisy Bell preparation.

mod quadrature;
mod tables;

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coupling_field, Layout, Position};
use crate::pauli::{rotation, PauliAxis};
use crate::simulator::{DiagonalHamiltonian, MixedState, PureState, Register};

pub use quadrature::{gauss_hermite, pairwise_sum};
pub use tables::{
    discretized_vector, reproduce_table, table1_vector, table2_models, ReproduceOptions, TableId, TableReport,
    TableRow, TABLE1, TABLE2, TABLE3,
};

/// Largest tensor grid the quadrature estimator will walk.
pub const MAX_QUADRATURE_NODES: usize = 20_000_000;

/// Distance below which a sampled target is treated as sitting on a control.
const COLLISION_RADIUS: f64 = 1e-9;

/// Isotropic Gaussian spread of each target around its mean position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionNoiseModel {
    sigma: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<(usize, f64)>,
}

impl PositionNoiseModel {
    pub fn new(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(PositionNoiseModel {
            sigma,
            overrides: Vec::new(),
        })
    }

    /// Use `sigma` for target `j` instead of the common value.
    pub fn with_override(mut self, j: usize, sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        self.overrides.retain(|(k, _)| *k != j);
        self.overrides.push((j, sigma));
        Ok(self)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sigma_of(&self, j: usize) -> f64 {
        self.overrides
            .iter()
            .find(|(k, _)| *k == j)
            .map_or(self.sigma, |(_, s)| *s)
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma must be non-negative, got {sigma}")));
    }
    Ok(())
}

/// How the position average is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Estimator {
    MonteCarlo { samples: usize, seed: u64 },
    GaussHermite { points: usize },
}

impl Default for Estimator {
    fn default() -> Self {
        Estimator::GaussHermite { points: 9 }
    }
}

impl Estimator {
    fn validate(&self) -> Result<()> {
        match *self {
            Estimator::MonteCarlo { samples, .. } if samples < 2 => {
                Err(Error::InvalidArgument("Monte Carlo needs at least two samples".into()))
            }
            Estimator::GaussHermite { points } if points == 0 => {
                Err(Error::InvalidArgument("quadrature needs at least one point".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate {
    pub fidelity: f64,
    /// Zero for quadrature.
    pub std_error: f64,
    pub method: Estimator,
}

/// Draw every target from its Gaussian; controls stay put. A draw landing on
/// a control qubit is redrawn.
pub fn sample_positions<R: rand::Rng + ?Sized>(
    model: &PositionNoiseModel,
    layout: &Layout,
    rng: &mut R,
) -> Result<Layout> {
    let mut targets = Vec::with_capacity(layout.n_targets());
    for (j, mean) in layout.targets().iter().enumerate() {
        let s = model.sigma_of(j);
        let mut tries = 0;
        loop {
            let delta: Vec<f64> = (0..layout.dim())
                .map(|_| s * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
                .collect::<Vec<f64>>();
            let p = mean.shifted(&delta);
            if layout.controls().iter().all(|c| c.distance(&p) > COLLISION_RADIUS) {
                targets.push(p);
                break;
            }
            tries += 1;
            log::warn!("target {j} drawn onto a control qubit; redrawing");
            if tries > 1000 {
                return Err(Error::DegenerateGeometry(format!(
                    "target {j} keeps landing on a control qubit"
                )));
            }
        }
    }
    layout.with_targets(targets)
}

/// Two-target gate-sequence entangler whose couplings follow the target
/// positions: `U^dag exp(i omega X_L) U` with `U = exp(-i t Z_L sum_j lambda_j(r_j) Z_j)`,
/// starting from `|+_L>|+>^n`. Every target is simulated, including those
/// the pattern nominally leaves alone.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyGateSequence {
    pub layout: Layout,
    pub c: Vec<f64>,
    pub time: f64,
    pub omega: f64,
    /// Kept target pair whose state is scored.
    pub pair: (usize, usize),
}

impl NoisyGateSequence {
    /// Bell preparation on targets 0 and 1: `omega = pi/4` and
    /// `t = pi / (4 lambda_0)` at the mean geometry.
    pub fn bell(layout: Layout, c: Vec<f64>) -> Result<Self> {
        if c.len() != layout.n_controls() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} controls",
                c.len(),
                layout.n_controls()
            )));
        }
        if layout.n_targets() < 2 {
            return Err(Error::InvalidLayout("Bell preparation needs two targets".into()));
        }
        let lambda = dot(&coupling_field(&layout.targets()[0], &layout)?, &c);
        if lambda.abs() < 1e-12 {
            return Err(Error::DegeneratePattern("target 0 is not coupled".into()));
        }
        Ok(NoisyGateSequence {
            time: FRAC_PI_4 / lambda,
            omega: FRAC_PI_4,
            layout,
            c,
            pair: (0, 1),
        })
    }

    pub fn n_targets(&self) -> usize {
        self.layout.n_targets()
    }

    /// Couplings seen by targets at `positions`.
    pub fn lambdas_at(&self, positions: &[Position]) -> Result<Vec<f64>> {
        positions
            .iter()
            .map(|p| Ok(dot(&coupling_field(p, &self.layout)?, &self.c)))
            .collect()
    }

    /// Final logical-register state for the given couplings.
    pub fn final_state(&self, lambdas: &[f64]) -> Result<PureState> {
        let reg = Register::Logical { targets: self.n_targets() };
        let mut psi = PureState::plus(reg)?;
        let h = DiagonalHamiltonian::logical_pattern(reg, lambdas)?;
        psi.evolve_diagonal(&h, -self.time)?;
        psi.apply_single(0, &rotation(PauliAxis::X, -self.omega))?;
        psi.evolve_diagonal(&h, self.time)?;
        Ok(psi)
    }

    /// `(|00> + i|01> + i|10> + |11>) / 2` on the scored pair.
    pub fn target(&self) -> PureState {
        let h = Complex64::new(0.5, 0.0);
        let ih = Complex64::new(0.0, 0.5);
        PureState::from_amplitudes(Register::Physical { controls: 0, targets: 2 }, vec![h, ih, ih, h])
            .expect("normalized")
    }

    /// Register indices of the scored pair.
    pub fn keep(&self) -> Vec<usize> {
        vec![1 + self.pair.0, 1 + self.pair.1]
    }
}

fn dot(a: &nalgebra::DVector<f64>, c: &[f64]) -> f64 {
    a.iter().zip(c).map(|(x, y)| x * y).sum()
}

/// Weighted displacement sets, one entry per target and coordinate.
struct Nodes {
    displacements: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn noise_axes(protocol: &NoisyGateSequence, model: &PositionNoiseModel) -> Vec<f64> {
    let dim = protocol.layout.dim();
    (0..protocol.n_targets())
        .flat_map(|j| std::iter::repeat(model.sigma_of(j)).take(dim))
        .collect()
}

fn nodes(protocol: &NoisyGateSequence, model: &PositionNoiseModel, method: &Estimator) -> Result<Nodes> {
    method.validate()?;
    let sig = noise_axes(protocol, model);
    match *method {
        Estimator::GaussHermite { points } => {
            // Axes without spread collapse to a single node.
            let (x, w) = gauss_hermite(points)?;
            let per_axis: Vec<usize> = sig.iter().map(|s| if *s == 0.0 { 1 } else { points }).collect();
            let total = per_axis
                .iter()
                .try_fold(1usize, |acc, &p| acc.checked_mul(p).filter(|t| *t <= MAX_QUADRATURE_NODES))
                .ok_or(Error::ResourceCap {
                    requested: points.saturating_pow(sig.len() as u32),
                    cap: MAX_QUADRATURE_NODES,
                })?;
            let mut displacements = Vec::with_capacity(total);
            let mut weights = Vec::with_capacity(total);
            let mut idx = vec![0usize; sig.len()];
            for _ in 0..total {
                let mut d = Vec::with_capacity(sig.len());
                let mut wt = 1.0;
                for (a, &i) in idx.iter().enumerate() {
                    if per_axis[a] == 1 {
                        d.push(0.0);
                    } else {
                        d.push(sig[a] * std::f64::consts::SQRT_2 * x[i]);
                        wt *= w[i];
                    }
                }
                displacements.push(d);
                weights.push(wt);
                for a in (0..idx.len()).rev() {
                    idx[a] += 1;
                    if idx[a] < per_axis[a] {
                        break;
                    }
                    idx[a] = 0;
                }
            }
            Ok(Nodes { displacements, weights })
        }
        Estimator::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut displacements = Vec::with_capacity(samples);
            for _ in 0..samples {
                let placed = sample_positions(model, &protocol.layout, &mut rng)?;
                let d = placed
                    .targets()
                    .iter()
                    .zip(protocol.layout.targets())
                    .flat_map(|(p, m)| p.coords().iter().zip(m.coords()).map(|(a, b)| a - b).collect::<Vec<_>>())
                    .collect();
                displacements.push(d);
            }
            let w = 1.0 / samples as f64;
            Ok(Nodes {
                displacements,
                weights: vec![w; samples],
            })
        }
    }
}

fn positions(protocol: &NoisyGateSequence, d: &[f64]) -> Vec<Position> {
    let dim = protocol.layout.dim();
    protocol
        .layout
        .targets()
        .iter()
        .enumerate()
        .map(|(j, m)| m.shifted(&d[j * dim..(j + 1) * dim]))
        .collect()
}

const CHUNK: usize = 4096;

/// Position-averaged density operator of the whole logical register.
pub fn noisy_protocol_density(
    protocol: &NoisyGateSequence,
    model: &PositionNoiseModel,
    method: &Estimator,
) -> Result<MixedState> {
    let nodes = nodes(protocol, model, method)?;
    let dim = 1usize << (1 + protocol.n_targets());
    let partials: Vec<Result<nalgebra::DMatrix<Complex64>>> = nodes
        .displacements
        .par_chunks(CHUNK)
        .zip(nodes.weights.par_chunks(CHUNK))
        .map(|(ds, ws)| {
            let mut acc = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
            for (d, w) in ds.iter().zip(ws) {
                let psi = protocol.final_state(&protocol.lambdas_at(&positions(protocol, d))?)?;
                let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
                acc += (&v * v.adjoint()) * Complex64::from(*w);
            }
            Ok(acc)
        })
        .collect();
    let mut mats = partials.into_iter().collect::<Result<Vec<_>>>()?;
    while mats.len() > 1 {
        let mut next = Vec::with_capacity(mats.len().div_ceil(2));
        let mut it = mats.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a + b,
                None => a,
            });
        }
        mats = next;
    }
    let rho = mats.pop().unwrap_or_else(|| nalgebra::DMatrix::zeros(dim, dim));
    MixedState::from_matrix(rho)
}

/// Position-averaged `<target| tr_rest(rho) |target>` on the scored pair.
pub fn noisy_fidelity(
    protocol: &NoisyGateSequence,
    model: &PositionNoiseModel,
    target: &PureState,
    keep: &[usize],
    method: &Estimator,
) -> Result<NoiseEstimate> {
    let nodes = nodes(protocol, model, method)?;
    let values: Vec<Result<f64>> = nodes
        .displacements
        .par_iter()
        .map(|d| {
            let psi = protocol.final_state(&protocol.lambdas_at(&positions(protocol, d))?)?;
            psi.fidelity(target, keep)
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let weighted: Vec<f64> = values.iter().zip(&nodes.weights).map(|(v, w)| v * w).collect();
    let fidelity = pairwise_sum(&weighted);
    let std_error = match method {
        Estimator::GaussHermite { .. } => 0.0,
        Estimator::MonteCarlo { samples, .. } => {
            let n = *samples as f64;
            let sq: Vec<f64> = values.iter().map(|v| (v - fidelity) * (v - fidelity)).collect();
            (pairwise_sum(&sq) / (n - 1.0)).sqrt() / n.sqrt()
        }
    };
    Ok(NoiseEstimate {
        fidelity,
        std_error,
        method: *method,
    })
}
