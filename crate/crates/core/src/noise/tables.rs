use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{noisy_fidelity, Estimator, NoisyGateSequence, PositionNoiseModel};
use crate::error::{Error, Result};
use crate::geometry::Layout;
use crate::pattern::{
    discretized_robust_solve, max_coupling, max_coupling_vector, solve_pattern, taylor_robust_solve,
    regions_at_targets, InteractionPattern, RegionMethod, RegionSpec, Selection, SubspaceVector,
};
use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    Table1,
    Table2,
    Table3,
    AppG,
    AppH,
}

impl TableId {
    pub const ALL: [TableId; 5] = [TableId::AppG, TableId::AppH, TableId::Table1, TableId::Table2, TableId::Table3];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::Table1 => "table1",
            TableId::Table2 => "table2",
            TableId::Table3 => "table3",
            TableId::AppG => "appG",
            TableId::AppH => "appH",
        }
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table1" => Ok(TableId::Table1),
            "table2" => Ok(TableId::Table2),
            "table3" => Ok(TableId::Table3),
            "appg" => Ok(TableId::AppG),
            "apph" => Ok(TableId::AppH),
            _ => Err(Error::Parse(format!("unknown table '{s}'"))),
        }
    }
}

/// One computed value against its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub computed: f64,
    pub published: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl TableRow {
    fn new(label: impl Into<String>, computed: f64, published: f64, tolerance: f64) -> Self {
        let deviation = computed - published;
        TableRow {
            label: label.into(),
            computed,
            published,
            deviation,
            tolerance,
            pass: deviation.abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub id: TableId,
    /// Everything needed to rerun the comparison.
    pub config: serde_json::Value,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,computed,published,deviation,tolerance,pass\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "\"{}\",{:.9},{:.9},{:.3e},{:.3e},{}",
                r.label.replace('"', "'"),
                r.computed,
                r.published,
                r.deviation,
                r.tolerance,
                r.pass
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<5} {:<44} computed {:>12.6} published {:>12.6} dev {:>10.2e} tol {:.1e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.label,
                r.computed,
                r.published,
                r.deviation,
                r.tolerance
            );
        }
        out
    }
}

/// Knobs shared by the table reproductions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReproduceOptions {
    /// Quadrature points per axis.
    pub points: usize,
    /// Also run a seeded Monte Carlo estimate with this many samples.
    pub mc_samples: Option<usize>,
    pub seed: u64,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            points: 9,
            mc_samples: None,
            seed: 0,
        }
    }
}

pub const TABLE1: [(f64, f64); 4] = [(0.15, 0.918986), (0.10, 0.965297), (0.05, 0.991552), (0.01, 0.999665)];
pub const TABLE1_TOL: f64 = 5e-4;

/// Rows `(sigma, F0, F1, F2, F3)`.
pub const TABLE2: [(f64, [f64; 4]); 4] = [
    (0.25, [0.934582, 0.948641, 0.981530, 0.990489]),
    (0.20, [0.959314, 0.967918, 0.993573, 0.996809]),
    (0.15, [0.977671, 0.982306, 0.998282, 0.999155]),
    (0.10, [0.990255, 0.992248, 0.999701, 0.999853]),
];
pub const TABLE2_TOL: [f64; 4] = [5e-4, 5e-4, 2e-3, 5e-3];

/// Rows `(sigma, gain, c)`.
pub const TABLE3: [(f64, f64, [f64; 9]); 4] = [
    (0.25, 0.0139, [-0.0970, 0.3703, -0.0966, 0.3827, -1.0, 0.3814, -0.0331, 0.1508, -0.0324]),
    (0.20, 0.0136, [-0.0945, 0.3675, -0.0941, 0.3788, -1.0, 0.3775, -0.0307, 0.1504, -0.0301]),
    (0.15, 0.0133, [-0.0927, 0.3654, -0.0923, 0.3756, -1.0, 0.3748, -0.0292, 0.1506, -0.0287]),
    (0.10, 0.0131, [-0.0913, 0.3639, -0.0911, 0.3739, -1.0, 0.3735, -0.0285, 0.1513, -0.0282]),
];
pub const TABLE3_TOL: f64 = 5e-4;

fn pattern(v: &[f64]) -> InteractionPattern {
    InteractionPattern::new(v.to_vec()).expect("valid pattern")
}

/// Subspace vector of the Table 1 entangler: the full cross couples targets
/// 0 and 1 only, fourth target included, then the fourth target is dropped.
pub fn table1_vector() -> Result<SubspaceVector> {
    solve_pattern(&presets::cross8().coupling_matrix(), &pattern(&[1.0, 1.0, 0.0, 0.0]))
}

/// The four couplings compared in Table 2, each with the layout it runs on:
/// three-control exact solve, nine-control maximal coupling, first-order
/// Taylor, and discretized regions at `sigma`.
pub fn table2_models(sigma: f64) -> Result<[(Layout, SubspaceVector); 4]> {
    let target = pattern(&[1.0, 1.0, 0.0]);
    let grid = presets::grid12();
    let small = presets::grid12_min();
    let c0 = solve_pattern(&small.coupling_matrix(), &target)?;
    let c1 = max_coupling_vector(&grid.coupling_matrix(), &target)?;
    let taylor = taylor_robust_solve(
        &grid,
        &regions_at_targets(&grid, &RegionMethod::Taylor { order: 1 }),
        &target,
        Selection::MaxCoupling,
    )?;
    let disc = discretized_vector(sigma)?;
    Ok([(small, c0), (grid.clone(), c1), (grid.clone(), taylor), (grid, disc)])
}

pub fn discretized_vector(sigma: f64) -> Result<SubspaceVector> {
    let grid = presets::grid12();
    let regions: Vec<RegionSpec> = grid
        .targets()
        .iter()
        .map(|t| RegionSpec::discretize(t.clone(), RegionSpec::default_offsets(2, sigma)))
        .collect::<Result<_>>()?;
    discretized_robust_solve(&grid, &regions, &pattern(&[1.0, 1.0, 0.0]), Selection::MinNorm)
}

fn bell_fidelity(layout: &Layout, c: &SubspaceVector, sigma: f64, method: &Estimator) -> Result<super::NoiseEstimate> {
    let proto = NoisyGateSequence::bell(layout.clone(), c.c().to_vec())?;
    let model = PositionNoiseModel::new(sigma)?;
    noisy_fidelity(&proto, &model, &proto.target(), &proto.keep(), method)
}

/// Recompute a published table and compare cell by cell.
pub fn reproduce_table(id: TableId, opts: &ReproduceOptions) -> Result<TableReport> {
    let gh = Estimator::GaussHermite { points: opts.points };
    let mut rows = Vec::new();
    let mut config = json!({ "estimator": gh, "seed": opts.seed, "mc_samples": opts.mc_samples });
    match id {
        TableId::Table1 => {
            let layout = presets::cross7();
            let c = table1_vector()?;
            config["layout"] = json!("cross7");
            config["c"] = json!(c.c());
            for (sigma, published) in TABLE1 {
                let q = bell_fidelity(&layout, &c, sigma, &gh)?;
                rows.push(TableRow::new(format!("sigma={sigma:.2} quadrature"), q.fidelity, published, TABLE1_TOL));
                if let Some(samples) = opts.mc_samples {
                    let mc = Estimator::MonteCarlo { samples, seed: opts.seed };
                    let m = bell_fidelity(&layout, &c, sigma, &mc)?;
                    rows.push(TableRow::new(
                        format!("sigma={sigma:.2} monte carlo"),
                        m.fidelity,
                        published,
                        3.0 * m.std_error,
                    ));
                }
            }
        }
        TableId::Table2 => {
            config["offsets"] = json!("center, +y, -x at distance sigma");
            config["columns"] = json!(["three controls", "max coupling", "taylor", "discretized"]);
            for (sigma, published) in TABLE2 {
                let models = table2_models(sigma)?;
                let names = ["F0 three controls", "F1 max coupling", "F2 taylor", "F3 discretized"];
                for k in 0..4 {
                    let (layout, c) = &models[k];
                    let q = bell_fidelity(layout, c, sigma, &gh)?;
                    rows.push(TableRow::new(
                        format!("sigma={sigma:.2} {}", names[k]),
                        q.fidelity,
                        published[k],
                        TABLE2_TOL[k],
                    ));
                }
            }
        }
        TableId::Table3 => {
            config["offsets"] = json!("center, +y, -x at distance sigma");
            for (sigma, gain, published) in TABLE3 {
                let v = discretized_vector(sigma)?;
                for (i, (&got, &want)) in v.c().iter().zip(&published).enumerate() {
                    rows.push(TableRow::new(format!("sigma={sigma:.2} c[{}]", i + 1), got, want, TABLE3_TOL));
                }
                rows.push(TableRow::new(format!("sigma={sigma:.2} gain"), v.coupling_gain(), gain, 5e-5));
            }
        }
        TableId::AppG => {
            let f = presets::linear4().coupling_matrix();
            for (label, p, want) in [
                ("lambda_max (1,0)", [1.0, 0.0], 0.75),
                ("lambda_max (0,1)", [0.0, 1.0], 0.75),
                ("lambda_max (1,1)", [1.0, 1.0], 1.5),
            ] {
                rows.push(TableRow::new(label, max_coupling(&f, &pattern(&p))?, want, 1e-12));
            }
            let (d1, d2, d3) = (0.8, 1.3, 1.7);
            config["spacings"] = json!([d1, d2, d3]);
            let m = presets::linear4_spaced(d1, d2, d3)?.coupling_matrix().matrix().clone();
            rows.push(TableRow::new(
                "generic spacing F * closed-form inverse - I",
                inverse_residual(&m),
                0.0,
                1e-12,
            ));
        }
        TableId::AppH => {
            let lin = presets::linear4().coupling_matrix();
            for (label, p, want) in [("linear4 c for (1,0), second entry", [1.0, 0.0], -0.5), ("linear4 c for (1,1), second entry", [1.0, 1.0], 1.0)] {
                let c = solve_pattern(&lin, &pattern(&p))?;
                rows.push(TableRow::new(label, c.c()[1] / c.c()[0], want, 1e-12));
            }
            let layout = presets::cross8();
            let f = layout.coupling_matrix();
            for (p, want) in [
                ([1.0, 1.0, 1.0, 1.0], 2.76),
                ([1.0, 0.0, 0.0, 0.0], 0.46),
                ([1.0, 1.0, 0.0, 0.0], 0.84),
                ([1.0, 0.0, 1.0, 0.0], 0.43),
                ([1.0, 1.0, 1.0, 0.0], 0.56),
            ] {
                rows.push(TableRow::new(format!("cross8 lambda_max {p:?}"), max_coupling(&f, &pattern(&p))?, want, 0.01));
            }
            let fs = layout.self_couplings().target;
            rows.push(TableRow::new("cross8 target coupling (1,2)", fs[(0, 1)], 0.47, 0.01));
            rows.push(TableRow::new("cross8 target coupling (1,3)", fs[(0, 2)], 0.33, 0.01));
        }
    }
    Ok(TableReport { id, config, rows })
}

/// `max |F F^-1 - I|` with the 2x2 inverse written out.
fn inverse_residual(m: &DMatrix<f64>) -> f64 {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let det = a * d - b * c;
    let inv = DMatrix::from_row_slice(2, 2, &[d / det, -b / det, -c / det, a / det]);
    (m * inv - DMatrix::identity(2, 2)).abs().max()
}
