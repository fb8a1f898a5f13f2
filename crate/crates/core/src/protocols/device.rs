use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CouplingMatrix, Layout, SelfCouplings};
use crate::logical::cx_pair_time;
use crate::presets;

/// Durations charged to the trace for steps whose physical length is not
/// set by an interaction pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingModel {
    /// Preparing the logical qubit in a chosen eigenstate.
    pub preparation: f64,
    /// One general logical gate.
    pub logical_gate: f64,
    /// One logical readout.
    pub measurement: f64,
    /// Rate of logical Z rotations and the strength of the global control field.
    pub drive: f64,
}

impl TimingModel {
    /// Two CX chains from control 0 per logical gate, half of that for
    /// preparation, instantaneous readout, unit drive.
    pub fn derived(control_couplings: &DMatrix<f64>) -> Result<Self> {
        let mut gate = 0.0;
        for i in 1..control_couplings.nrows() {
            gate += 2.0 * cx_pair_time(control_couplings[(0, i)])?;
        }
        Ok(TimingModel {
            preparation: gate / 2.0,
            logical_gate: gate,
            measurement: 0.0,
            drive: 1.0,
        })
    }

    /// Override the logical gate time; preparation follows at half of it.
    pub fn with_logical_gate(mut self, t: f64) -> Self {
        self.logical_gate = t;
        self.preparation = t / 2.0;
        self
    }

    pub fn with_measurement(mut self, t: f64) -> Self {
        self.measurement = t;
        self
    }

    pub fn with_drive(mut self, omega: f64) -> Self {
        self.drive = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x >= 0.0 && x.is_finite();
        if !(ok(self.preparation) && ok(self.logical_gate) && ok(self.measurement)) {
            return Err(Error::InvalidArgument("step durations must be non-negative".into()));
        }
        if !(self.drive > 0.0 && self.drive.is_finite()) {
            return Err(Error::InvalidArgument(format!("drive must be positive, got {}", self.drive)));
        }
        Ok(())
    }
}

/// Couplings of a concrete control/target arrangement plus its timing.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    pub name: String,
    couplings: CouplingMatrix,
    self_couplings: SelfCouplings,
    pub timing: TimingModel,
    /// Whether target self-interactions act during coupling windows and gates.
    /// Free evolution windows always include them.
    pub include_target_self: bool,
}

impl Device {
    pub fn new(name: &str, couplings: CouplingMatrix, self_couplings: SelfCouplings) -> Result<Self> {
        let (n, m) = (couplings.n_controls(), couplings.n_targets());
        let square = |d: &DMatrix<f64>, k: usize| d.nrows() == k && d.ncols() == k;
        if !square(&self_couplings.control, n) || !square(&self_couplings.target, m) {
            return Err(Error::DimensionMismatch(format!(
                "self-couplings do not match {n} controls and {m} targets"
            )));
        }
        let timing = TimingModel::derived(&self_couplings.control)?;
        Ok(Device {
            name: name.to_string(),
            couplings,
            self_couplings,
            timing,
            include_target_self: false,
        })
    }

    pub fn from_layout(name: &str, layout: &Layout) -> Result<Self> {
        Self::new(name, layout.coupling_matrix(), layout.self_couplings())
    }

    /// Named preset; a quoted logical gate time replaces the derived one.
    pub fn from_preset(name: &str) -> Result<Self> {
        let p = presets::preset(name)?;
        let mut d = Self::from_layout(p.name, &p.layout)?;
        if let Some(t) = p.gate_time {
            d.timing = d.timing.with_logical_gate(t);
        }
        Ok(d)
    }

    pub fn with_timing(mut self, timing: TimingModel) -> Result<Self> {
        timing.validate()?;
        self.timing = timing;
        Ok(self)
    }

    pub fn with_target_self(mut self, on: bool) -> Self {
        self.include_target_self = on;
        self
    }

    /// Replace the target self-couplings, e.g. for randomized checks.
    pub fn with_target_couplings(mut self, target: DMatrix<f64>) -> Result<Self> {
        let m = self.n_targets();
        if target.nrows() != m || target.ncols() != m {
            return Err(Error::DimensionMismatch("target self-couplings".into()));
        }
        self.self_couplings.target = target;
        Ok(self)
    }

    pub fn couplings(&self) -> &CouplingMatrix {
        &self.couplings
    }

    pub fn self_couplings(&self) -> &SelfCouplings {
        &self.self_couplings
    }

    pub fn n_controls(&self) -> usize {
        self.couplings.n_controls()
    }

    pub fn n_targets(&self) -> usize {
        self.couplings.n_targets()
    }
}
