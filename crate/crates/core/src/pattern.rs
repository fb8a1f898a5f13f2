//! Subspace vectors for target interaction patterns, flip schedules, and
//! position-robust couplings.
//!
//! A control register in the logical subspace `span{|c>, |-c>}` couples to
//! target `S_j` with strength `lambda_j = sum_i F[j][i] c_i`. Fractional
//! `c_i` are realized by flipping control qubit `i` part-way through an
//! evolution window.

mod linsolve;
mod lp;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coupling_field, coupling_field_series, CouplingMatrix, Layout, Position};

/// Desired logical coupling to every target qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InteractionPattern(Vec<f64>);

impl InteractionPattern {
    pub fn new(lambdas: impl Into<Vec<f64>>) -> Result<Self> {
        let v = lambdas.into();
        if v.is_empty() {
            return Err(Error::InvalidArgument("empty interaction pattern".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite pattern entry".into()));
        }
        Ok(InteractionPattern(v))
    }

    /// Unit coupling to the listed targets (0-based) and none to the rest.
    pub fn indicator(n: usize, subset: &[usize]) -> Result<Self> {
        let mut v = vec![0.0; n];
        for &j in subset {
            *v.get_mut(j).ok_or(Error::QubitOutOfRange { index: j, len: n })? = 1.0;
        }
        Self::new(v)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        InteractionPattern(self.0.iter().map(|x| x * factor).collect())
    }
}

/// Normalized control vector with `max |c_i| = 1`.
///
/// `scale` is chosen so that `F * (scale * c)` equals the requested pattern;
/// the pattern actually realized with `c` is therefore `lambda / scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceVector {
    c: Vec<f64>,
    scale: f64,
}

impl SubspaceVector {
    /// Normalize a raw solution of `F c = lambda`.
    pub fn from_raw(raw: &[f64]) -> Result<Self> {
        let (imax, max) = raw
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, x)| if x.abs() > acc.1 { (i, x.abs()) } else { acc });
        if !(max > 0.0) || !max.is_finite() {
            return Err(Error::DegeneratePattern(
                "subspace vector is zero; nothing to normalize".into(),
            ));
        }
        let mut c: Vec<f64> = raw.iter().map(|x| x / max).collect();
        c[imax] = c[imax].signum();
        Ok(SubspaceVector { c, scale: max })
    }

    /// Already-normalized vector with a known scale.
    pub fn new(c: Vec<f64>, scale: f64) -> Result<Self> {
        if c.iter().any(|x| !x.is_finite() || x.abs() > 1.0 + 1e-12) {
            return Err(Error::InvalidSubspaceVector(
                "components must lie in [-1, 1]".into(),
            ));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidSubspaceVector("scale must be positive".into()));
        }
        let max = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if (max - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSubspaceVector(format!(
                "largest component has magnitude {max}, expected 1"
            )));
        }
        Ok(SubspaceVector {
            c: c.into_iter().map(|x| x.clamp(-1.0, 1.0)).collect(),
            scale,
        })
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Factor by which the requested pattern shrinks when realized with `c`.
    pub fn coupling_gain(&self) -> f64 {
        1.0 / self.scale
    }

    pub fn realized_pattern(&self, requested: &InteractionPattern) -> InteractionPattern {
        requested.scaled(self.coupling_gain())
    }

    /// Same subspace with every component negated (reverses the pattern sign).
    pub fn negated(&self) -> Self {
        SubspaceVector {
            c: self.c.iter().map(|x| -x).collect(),
            scale: self.scale,
        }
    }

    /// First index attaining the maximal magnitude.
    pub fn leading_index(&self) -> usize {
        self.c
            .iter()
            .position(|x| (x.abs() - 1.0).abs() <= 1e-12)
            .unwrap_or(0)
    }
}

/// How to pick one solution when the linear system leaves freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// Minimum Euclidean norm before normalization.
    #[default]
    MinNorm,
    /// Largest achievable coupling strength under `|c_i| <= 1`.
    MaxCoupling,
}

fn check_dims(f: &CouplingMatrix, target: &InteractionPattern) -> Result<()> {
    if f.n_targets() != target.len() {
        return Err(Error::DimensionMismatch(format!(
            "pattern has {} entries for {} targets",
            target.len(),
            f.n_targets()
        )));
    }
    Ok(())
}

/// Solve `F c = lambda` and normalize. Square systems are inverted exactly;
/// wider systems use the minimum-norm solution.
pub fn solve_pattern(f: &CouplingMatrix, target: &InteractionPattern) -> Result<SubspaceVector> {
    solve_pattern_with(f, target, Selection::MinNorm)
}

pub fn solve_pattern_with(
    f: &CouplingMatrix,
    target: &InteractionPattern,
    selection: Selection,
) -> Result<SubspaceVector> {
    check_dims(f, target)?;
    if linsolve::rank(f.matrix()) < f.n_targets() {
        return Err(Error::NoSolution(
            "coupling matrix does not have full row rank".into(),
        ));
    }
    solve_system(f.matrix(), target.lambdas(), selection, false)
}

/// Largest `s` with `F c = s * direction` and every `|c_i| <= 1`.
pub fn max_coupling(f: &CouplingMatrix, direction: &InteractionPattern) -> Result<f64> {
    Ok(max_coupling_vector(f, direction)?.coupling_gain())
}

/// The subspace vector attaining [`max_coupling`].
pub fn max_coupling_vector(f: &CouplingMatrix, direction: &InteractionPattern) -> Result<SubspaceVector> {
    solve_pattern_with(f, direction, Selection::MaxCoupling)
}

fn solve_system(
    a: &DMatrix<f64>,
    b: &[f64],
    selection: Selection,
    allow_least_squares: bool,
) -> Result<SubspaceVector> {
    if b.iter().all(|x| *x == 0.0) {
        return Err(Error::DegeneratePattern(
            "zero target pattern has only the zero solution".into(),
        ));
    }
    match selection {
        Selection::MinNorm => {
            let raw = linsolve::min_norm(a, &DVector::from_column_slice(b), allow_least_squares)?;
            SubspaceVector::from_raw(raw.as_slice())
        }
        Selection::MaxCoupling => {
            let (c, s) = lp::max_coupling(a, b)?;
            SubspaceVector::new(c, 1.0 / s)
        }
    }
}

/// A sign per control qubit: `+1` if the qubit still holds its original
/// orientation in the logical basis state `|0_L>`, `-1` if flipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frame(Vec<i8>);

impl Frame {
    pub fn up(n: usize) -> Self {
        Frame(vec![1; n])
    }

    pub fn from_signs(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidArgument("frame entries must be +1 or -1".into()));
        }
        Ok(Frame(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sign(&self, i: usize) -> f64 {
        f64::from(self.0[i])
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    /// Register bits of `|0_L>`: bit set where the sign is `-1`.
    pub fn bits(&self) -> Vec<bool> {
        self.0.iter().map(|s| *s < 0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipEvent {
    pub t: f64,
    pub qubit: usize,
}

/// Timed X flips on the control register over a window of length `duration`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipSchedule {
    duration: f64,
    events: Vec<FlipEvent>,
    initial_frame: Frame,
    terminal_frame: Frame,
}

impl FlipSchedule {
    /// Validate and sort the events; the terminal frame follows from flip parity.
    pub fn new(duration: f64, mut events: Vec<FlipEvent>, initial_frame: Frame) -> Result<Self> {
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::InvalidSchedule(format!("bad duration {duration}")));
        }
        let n = initial_frame.len();
        for e in &events {
            if !(0.0..=duration).contains(&e.t) {
                return Err(Error::InvalidSchedule(format!(
                    "event at t = {} outside [0, {duration}]",
                    e.t
                )));
            }
            if e.qubit >= n {
                return Err(Error::QubitOutOfRange { index: e.qubit, len: n });
            }
        }
        events.sort_by(|a, b| a.t.total_cmp(&b.t));
        let mut terminal_frame = initial_frame.clone();
        for e in &events {
            terminal_frame.flip(e.qubit);
        }
        Ok(FlipSchedule {
            duration,
            events,
            initial_frame,
            terminal_frame,
        })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn events(&self) -> &[FlipEvent] {
        &self.events
    }

    pub fn flip_count(&self) -> usize {
        self.events.len()
    }

    pub fn initial_frame(&self) -> &Frame {
        &self.initial_frame
    }

    pub fn terminal_frame(&self) -> &Frame {
        &self.terminal_frame
    }

    pub fn n_controls(&self) -> usize {
        self.initial_frame.len()
    }

    /// Time-averaged orientation of each control qubit relative to `|0_L>`,
    /// i.e. the effective `c` this schedule realizes.
    pub fn effective_vector(&self) -> Vec<f64> {
        if self.duration == 0.0 {
            return self.initial_frame.0.iter().map(|&s| f64::from(s)).collect();
        }
        let mut sign: Vec<f64> = vec![1.0; self.n_controls()];
        let mut last = vec![0.0; self.n_controls()];
        let mut acc = vec![0.0; self.n_controls()];
        for e in &self.events {
            acc[e.qubit] += sign[e.qubit] * (e.t - last[e.qubit]);
            last[e.qubit] = e.t;
            sign[e.qubit] = -sign[e.qubit];
        }
        (0..self.n_controls())
            .map(|i| {
                let total = acc[i] + sign[i] * (self.duration - last[i]);
                f64::from(self.initial_frame.0[i]) * total / self.duration
            })
            .collect()
    }

    /// Bound on flips per subspace evolution: at most one per control qubit.
    pub fn within_subspace_bound(&self) -> bool {
        self.flip_count() <= self.n_controls()
    }
}

/// Flip schedule realizing `c` over `tau`, starting from the all-up frame.
pub fn compile_flip_schedule(c: &SubspaceVector, tau: f64) -> Result<FlipSchedule> {
    compile_flip_schedule_in_frame(c.c(), &Frame::up(c.c().len()), tau)
}

/// Flip schedule realizing the effective vector `c` when the logical basis
/// state currently sits in `frame`. Qubit `i` is flipped at
/// `(1 + frame_i c_i) tau / 2`; qubits with `frame_i c_i = 1` are left alone.
pub fn compile_flip_schedule_in_frame(c: &[f64], frame: &Frame, tau: f64) -> Result<FlipSchedule> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidSchedule(format!("duration must be positive, got {tau}")));
    }
    if c.len() != frame.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for {} control qubits",
            c.len(),
            frame.len()
        )));
    }
    if let Some(x) = c.iter().find(|x| !x.is_finite() || x.abs() > 1.0 + 1e-12) {
        return Err(Error::InvalidSubspaceVector(format!("component {x} outside [-1, 1]")));
    }
    let events = c
        .iter()
        .enumerate()
        .filter_map(|(i, &ci)| {
            let rel = (frame.sign(i) * ci).clamp(-1.0, 1.0);
            (rel < 1.0).then(|| FlipEvent {
                t: (1.0 + rel) * tau / 2.0,
                qubit: i,
            })
        })
        .collect();
    FlipSchedule::new(tau, events, frame.clone())
}

/// How a target region is turned into linear constraints on `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum RegionMethod {
    /// Match the coupling at the center only.
    Point,
    /// Match the value and cancel every mixed partial derivative up to `order`.
    Taylor { order: usize },
    /// Match the coupling at each virtual qubit `center + offset`.
    Discretize { offsets: Vec<Vec<f64>> },
}

/// Region around the expected position of one target qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub center: Position,
    #[serde(flatten)]
    pub method: RegionMethod,
}

impl RegionSpec {
    pub fn point(center: Position) -> Self {
        RegionSpec {
            center,
            method: RegionMethod::Point,
        }
    }

    pub fn taylor(center: Position, order: usize) -> Result<Self> {
        let r = RegionSpec {
            center,
            method: RegionMethod::Taylor { order },
        };
        r.validate()?;
        Ok(r)
    }

    pub fn discretize(center: Position, offsets: Vec<Vec<f64>>) -> Result<Self> {
        let r = RegionSpec {
            center,
            method: RegionMethod::Discretize { offsets },
        };
        r.validate()?;
        Ok(r)
    }

    /// Center plus two virtual qubits at distance `sigma`: one along `+y`
    /// and one along `-x` (1D: `+x` and `-x`; 3D: `+y` and `-x`).
    pub fn default_offsets(dim: usize, sigma: f64) -> Vec<Vec<f64>> {
        match dim {
            1 => vec![vec![0.0], vec![sigma], vec![-sigma]],
            2 => vec![vec![0.0, 0.0], vec![0.0, sigma], vec![-sigma, 0.0]],
            _ => vec![vec![0.0, 0.0, 0.0], vec![0.0, sigma, 0.0], vec![-sigma, 0.0, 0.0]],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.method {
            RegionMethod::Point => Ok(()),
            RegionMethod::Taylor { order } if *order == 0 => Err(Error::InvalidArgument(
                "Taylor order must be at least 1".into(),
            )),
            RegionMethod::Taylor { .. } => Ok(()),
            RegionMethod::Discretize { offsets } => {
                if offsets.is_empty() {
                    return Err(Error::InvalidArgument("no virtual-qubit offsets".into()));
                }
                if let Some(o) = offsets.iter().find(|o| o.len() != self.center.dim()) {
                    return Err(Error::DimensionMismatch(format!(
                        "offset of dimension {} around a {}-dimensional center",
                        o.len(),
                        self.center.dim()
                    )));
                }
                for (a, oa) in offsets.iter().enumerate() {
                    if oa.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidArgument("non-finite offset".into()));
                    }
                    if offsets[a + 1..].iter().any(|ob| ob == oa) {
                        return Err(Error::InvalidArgument("duplicate virtual-qubit offset".into()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Number of linear constraints this region contributes.
    pub fn constraint_count(&self, dim: usize) -> usize {
        match &self.method {
            RegionMethod::Point => 1,
            RegionMethod::Taylor { order } => binomial(dim + order, *order),
            RegionMethod::Discretize { offsets } => offsets.len(),
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// One region per target, centered on its expected position.
pub fn regions_at_targets(layout: &Layout, method: &RegionMethod) -> Vec<RegionSpec> {
    layout
        .targets()
        .iter()
        .map(|t| RegionSpec {
            center: t.clone(),
            method: method.clone(),
        })
        .collect()
}

/// Stacked constraint system `A c = b` for a list of regions.
pub fn region_system(
    layout: &Layout,
    regions: &[RegionSpec],
    target: &InteractionPattern,
) -> Result<(DMatrix<f64>, Vec<f64>)> {
    if regions.len() != target.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} regions for a pattern of length {}",
            regions.len(),
            target.len()
        )));
    }
    let n_controls = layout.n_controls();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    for (region, &lambda) in regions.iter().zip(target.lambdas()) {
        region.validate()?;
        match &region.method {
            RegionMethod::Point => {
                rows.push(coupling_field(&region.center, layout)?.iter().copied().collect());
                rhs.push(lambda);
            }
            RegionMethod::Taylor { order } => {
                let series = coupling_field_series(&region.center, layout, *order)?;
                for t in 0..series.indices.len() {
                    rows.push((0..n_controls).map(|i| series.coefficients[(t, i)]).collect());
                    rhs.push(if t == 0 { lambda } else { 0.0 });
                }
            }
            RegionMethod::Discretize { offsets } => {
                for o in offsets {
                    let v = region.center.shifted(o);
                    rows.push(coupling_field(&v, layout)?.iter().copied().collect());
                    rhs.push(lambda);
                }
            }
        }
    }
    let a = DMatrix::from_fn(rows.len(), n_controls, |r, c| rows[r][c]);
    Ok((a, rhs))
}

/// Coupling that is flat to order `k` around each region center.
pub fn taylor_robust_solve(
    layout: &Layout,
    regions: &[RegionSpec],
    target: &InteractionPattern,
    selection: Selection,
) -> Result<SubspaceVector> {
    if regions
        .iter()
        .any(|r| matches!(r.method, RegionMethod::Discretize { .. }))
    {
        return Err(Error::InvalidArgument(
            "Taylor solve takes point or Taylor regions".into(),
        ));
    }
    let needed: usize = regions.iter().map(|r| r.constraint_count(layout.dim())).sum();
    if needed > layout.n_controls() {
        return Err(Error::InsufficientControls {
            needed,
            have: layout.n_controls(),
        });
    }
    let (a, b) = region_system(layout, regions, target)?;
    solve_system(&a, &b, selection, false).map_err(|e| match e {
        Error::NoSolution(m) => Error::NoSolution(format!("stacked Taylor system: {m}")),
        other => other,
    })
}

/// Coupling matched at every virtual qubit of every region.
pub fn discretized_robust_solve(
    layout: &Layout,
    regions: &[RegionSpec],
    target: &InteractionPattern,
    selection: Selection,
) -> Result<SubspaceVector> {
    if regions
        .iter()
        .any(|r| matches!(r.method, RegionMethod::Taylor { .. }))
    {
        return Err(Error::InvalidArgument(
            "discretized solve takes point or discretize regions".into(),
        ));
    }
    let (a, b) = region_system(layout, regions, target)?;
    if a.nrows() == a.ncols() && linsolve::rank(&a) < a.nrows() {
        return Err(Error::NoSolution("singular virtual coupling matrix".into()));
    }
    solve_system(&a, &b, selection, true)
}
