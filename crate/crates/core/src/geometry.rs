//! Qubit layouts and the distance-dependent ZZ coupling model.
//!
//! Couplings follow `J * |r_a - r_b|^(-alpha)`. Lengths are in units of the
//! base spacing and energies in units of `J`, so every time reported by the
//! crate is in units of `d^alpha / J`.

mod series;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use series::{FieldSeries, MultiIndex};

/// A point in one, two or three dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(Vec<f64>);

impl Position {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        Position(coords.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &Position) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Componentwise `self + delta`.
    pub fn shifted(&self, delta: &[f64]) -> Position {
        Position(self.0.iter().zip(delta).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, factor: f64) -> Position {
        Position(self.0.iter().map(|a| a * factor).collect())
    }

    fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl From<Vec<f64>> for Position {
    fn from(v: Vec<f64>) -> Self {
        Position(v)
    }
}

/// Positions of the control and target registers plus the coupling model.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    dim: usize,
    coupling_constant: f64,
    exponent: f64,
    controls: Vec<Position>,
    targets: Vec<Position>,
}

#[derive(Serialize, Deserialize)]
struct LayoutDoc {
    dim: usize,
    #[serde(rename = "J", default = "unit")]
    coupling_constant: f64,
    #[serde(default = "unit")]
    alpha: f64,
    control: Vec<Vec<f64>>,
    target: Vec<Vec<f64>>,
}

fn unit() -> f64 {
    1.0
}

impl Layout {
    /// Layout with `J = 1` and `alpha = 1`.
    pub fn new(controls: Vec<Position>, targets: Vec<Position>) -> Result<Self> {
        Self::with_model(controls, targets, 1.0, 1.0)
    }

    pub fn with_model(
        controls: Vec<Position>,
        targets: Vec<Position>,
        coupling_constant: f64,
        exponent: f64,
    ) -> Result<Self> {
        if controls.is_empty() || targets.is_empty() {
            return Err(Error::InvalidLayout(
                "need at least one control and one target qubit".into(),
            ));
        }
        let dim = controls[0].dim();
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidLayout(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if let Some(p) = controls.iter().chain(&targets).find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "position of dimension {} in a {dim}-dimensional layout",
                p.dim()
            )));
        }
        if controls.iter().chain(&targets).any(|p| !p.is_finite()) {
            return Err(Error::InvalidLayout("non-finite coordinate".into()));
        }
        if !(coupling_constant.is_finite() && coupling_constant > 0.0) {
            return Err(Error::InvalidLayout(format!(
                "coupling constant must be positive and finite, got {coupling_constant}"
            )));
        }
        if !exponent.is_finite() {
            return Err(Error::InvalidLayout("exponent must be finite".into()));
        }
        let all: Vec<&Position> = controls.iter().chain(&targets).collect();
        for (a, pa) in all.iter().enumerate() {
            for pb in &all[a + 1..] {
                if pa.distance(pb) <= 0.0 {
                    return Err(Error::DegenerateGeometry(format!(
                        "coincident positions at {:?}",
                        pa.coords()
                    )));
                }
            }
        }
        Ok(Layout {
            dim,
            coupling_constant,
            exponent,
            controls,
            targets,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LayoutDoc = serde_json::from_str(text)?;
        let layout = Self::with_model(
            doc.control.into_iter().map(Position).collect(),
            doc.target.into_iter().map(Position).collect(),
            doc.coupling_constant,
            doc.alpha,
        )?;
        if layout.dim != doc.dim {
            return Err(Error::DimensionMismatch(format!(
                "declared dim {} but coordinates have dimension {}",
                doc.dim, layout.dim
            )));
        }
        Ok(layout)
    }

    pub fn to_json(&self) -> String {
        let doc = LayoutDoc {
            dim: self.dim,
            coupling_constant: self.coupling_constant,
            alpha: self.exponent,
            control: self.controls.iter().map(|p| p.0.clone()).collect(),
            target: self.targets.iter().map(|p| p.0.clone()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("layout serializes")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coupling_constant(&self) -> f64 {
        self.coupling_constant
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn controls(&self) -> &[Position] {
        &self.controls
    }

    pub fn targets(&self) -> &[Position] {
        &self.targets
    }

    pub fn n_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn n_targets(&self) -> usize {
        self.targets.len()
    }

    /// Same controls and model, new target positions.
    pub fn with_targets(&self, targets: Vec<Position>) -> Result<Self> {
        Self::with_model(
            self.controls.clone(),
            targets,
            self.coupling_constant,
            self.exponent,
        )
    }

    /// Keep only the listed control qubits, in the given order.
    pub fn select_controls(&self, indices: &[usize]) -> Result<Self> {
        let controls = indices
            .iter()
            .map(|&i| {
                self.controls.get(i).cloned().ok_or(Error::QubitOutOfRange {
                    index: i,
                    len: self.controls.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_model(controls, self.targets.clone(), self.coupling_constant, self.exponent)
    }

    /// Keep only the listed target qubits, in the given order.
    pub fn select_targets(&self, indices: &[usize]) -> Result<Self> {
        let targets = indices
            .iter()
            .map(|&i| {
                self.targets.get(i).cloned().ok_or(Error::QubitOutOfRange {
                    index: i,
                    len: self.targets.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.with_targets(targets)
    }

    /// Multiply every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::with_model(
            self.controls.iter().map(|p| p.scaled(factor)).collect(),
            self.targets.iter().map(|p| p.scaled(factor)).collect(),
            self.coupling_constant,
            self.exponent,
        )
    }

    pub fn coupling_matrix(&self) -> CouplingMatrix {
        build_coupling_matrix(self).expect("validated layout has no coincident positions")
    }

    pub fn self_couplings(&self) -> SelfCouplings {
        let pairwise = |ps: &[Position]| {
            DMatrix::from_fn(ps.len(), ps.len(), |a, b| {
                if a == b {
                    0.0
                } else {
                    self.strength(&ps[a], &ps[b])
                }
            })
        };
        SelfCouplings {
            control: pairwise(&self.controls),
            target: pairwise(&self.targets),
        }
    }

    fn strength(&self, a: &Position, b: &Position) -> f64 {
        self.coupling_constant * a.distance(b).powf(-self.exponent)
    }
}

/// `J * |r_a - r_b|^(-alpha)`.
pub fn coupling_strength(a: &Position, b: &Position, coupling_constant: f64, exponent: f64) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "positions of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let r = a.distance(b);
    if r <= 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "coincident positions at {:?}",
            a.coords()
        )));
    }
    Ok(coupling_constant * r.powf(-exponent))
}

/// Control-to-target couplings: row `j` is target `S_j`, column `i` is control `C_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix(DMatrix<f64>);

impl CouplingMatrix {
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::InvalidArgument("empty coupling matrix".into()));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coupling".into()));
        }
        Ok(CouplingMatrix(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn n_targets(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_controls(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, target: usize, control: usize) -> f64 {
        self.0[(target, control)]
    }

    /// Interaction pattern produced by the subspace vector `c`.
    pub fn pattern(&self, c: &[f64]) -> Vec<f64> {
        (&self.0 * DVector::from_column_slice(c)).iter().copied().collect()
    }
}

pub fn build_coupling_matrix(layout: &Layout) -> Result<CouplingMatrix> {
    let mut m = DMatrix::zeros(layout.n_targets(), layout.n_controls());
    for (j, s) in layout.targets.iter().enumerate() {
        for (i, c) in layout.controls.iter().enumerate() {
            m[(j, i)] = coupling_strength(c, s, layout.coupling_constant, layout.exponent)?;
        }
    }
    Ok(CouplingMatrix(m))
}

/// Always-on couplings inside each register; symmetric with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfCouplings {
    pub control: DMatrix<f64>,
    pub target: DMatrix<f64>,
}

impl SelfCouplings {
    /// Registers of the given sizes with no self-interaction.
    pub fn none(n_controls: usize, n_targets: usize) -> Self {
        SelfCouplings {
            control: DMatrix::zeros(n_controls, n_controls),
            target: DMatrix::zeros(n_targets, n_targets),
        }
    }
}

fn check_point(r: &Position, layout: &Layout) -> Result<()> {
    if r.dim() != layout.dim {
        return Err(Error::DimensionMismatch(format!(
            "point of dimension {} in a {}-dimensional layout",
            r.dim(),
            layout.dim
        )));
    }
    if let Some(c) = layout.controls.iter().find(|c| c.distance(r) <= 0.0) {
        return Err(Error::DegenerateGeometry(format!(
            "point coincides with control qubit at {:?}",
            c.coords()
        )));
    }
    Ok(())
}

/// Couplings from every control qubit to a target placed at `r`.
pub fn coupling_field(r: &Position, layout: &Layout) -> Result<DVector<f64>> {
    check_point(r, layout)?;
    Ok(DVector::from_iterator(
        layout.n_controls(),
        layout.controls.iter().map(|c| layout.strength(c, r)),
    ))
}

/// Analytic gradient of [`coupling_field`]; row `i` is the gradient of the coupling to `C_i`.
pub fn coupling_field_gradient(r: &Position, layout: &Layout) -> Result<DMatrix<f64>> {
    check_point(r, layout)?;
    let mut g = DMatrix::zeros(layout.n_controls(), layout.dim);
    for (i, c) in layout.controls.iter().enumerate() {
        let dist = c.distance(r);
        let pref = -layout.exponent * layout.coupling_constant * dist.powf(-layout.exponent - 2.0);
        for d in 0..layout.dim {
            g[(i, d)] = pref * (r.0[d] - c.0[d]);
        }
    }
    Ok(g)
}

/// Taylor coefficients of the coupling field around `r` up to total degree `order`.
pub fn coupling_field_series(r: &Position, layout: &Layout, order: usize) -> Result<FieldSeries> {
    check_point(r, layout)?;
    Ok(series::field_series(r, layout, order))
}
