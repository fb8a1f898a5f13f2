use serde::{Deserialize, Serialize};

use crate::protocols::{FlipCategory, ProtocolTrace, StepKind};

/// Verdicts against the flip bounds. `None` where the bound does not apply to
/// the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// Every subspace evolution used at most `N` flips.
    pub per_use: bool,
    /// Every preparation used at most `N (N^2 - 1)` flips.
    pub preparation: bool,
    /// Every logical gate used at most `2 N (N^2 - 1)` flips.
    pub logical_gate: bool,
    /// Phase synthesis: `eta_lambda <= 2 N (2^n - 1)`.
    pub synthesis: Option<bool>,
    /// Graph preparation: `eta_lambda <= |E| N`.
    pub graph: Option<bool>,
}

impl BoundCheck {
    pub fn all_hold(&self) -> bool {
        self.per_use
            && self.preparation
            && self.logical_gate
            && self.synthesis.unwrap_or(true)
            && self.graph.unwrap_or(true)
    }
}

/// Flip tallies of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceLedger {
    pub n_controls: usize,
    pub n_targets: usize,
    /// Flips spent realizing entangling interaction patterns.
    pub eta_lambda: usize,
    /// Flips spent on logical-qubit preparation and logical gates.
    pub eta_logical: usize,
    /// Flips inside measurement corrections, kept apart from `eta_lambda`.
    pub eta_correction: usize,
    pub eta_idle: usize,
    /// Flips charged to readout and reinitialization.
    pub eta_readout: usize,
    pub max_per_use: usize,
    pub max_per_preparation: usize,
    pub max_per_gate: usize,
    pub bound_check: BoundCheck,
}

impl ResourceLedger {
    pub fn per_use_bound(&self) -> usize {
        self.n_controls
    }

    pub fn preparation_bound(&self) -> usize {
        let n = self.n_controls;
        n * (n * n).saturating_sub(1)
    }

    pub fn gate_bound(&self) -> usize {
        2 * self.preparation_bound()
    }
}

/// Tally a trace's flips by category and check them against the bounds.
pub fn flip_budget(trace: &ProtocolTrace) -> ResourceLedger {
    let n = trace.n_controls;
    let eta = |cat: FlipCategory| -> usize {
        trace
            .steps
            .iter()
            .filter(|s| s.category == cat)
            .map(|s| s.flips)
            .sum()
    };
    let eta_lambda = eta(FlipCategory::Entangling);
    let eta_logical = eta(FlipCategory::Preparation) + eta(FlipCategory::LogicalGate);
    let eta_correction = eta(FlipCategory::Correction);
    let eta_idle = eta(FlipCategory::Idle);
    let eta_readout = eta(FlipCategory::Readout);
    let max_of = |pred: &dyn Fn(&StepKind, FlipCategory) -> bool| {
        trace
            .steps
            .iter()
            .filter(|s| pred(&s.kind, s.category))
            .map(|s| s.flips)
            .max()
            .unwrap_or(0)
    };
    let max_per_use = max_of(&|k, _| matches!(k, StepKind::Couple { .. }));
    let max_per_preparation = max_of(&|_, c| c == FlipCategory::Preparation);
    let max_per_gate = max_of(&|_, c| c == FlipCategory::LogicalGate);
    let mut ledger = ResourceLedger {
        n_controls: n,
        n_targets: trace.n_targets,
        eta_lambda,
        eta_logical,
        eta_correction,
        eta_idle,
        eta_readout,
        max_per_use,
        max_per_preparation,
        max_per_gate,
        bound_check: BoundCheck {
            per_use: true,
            preparation: true,
            logical_gate: true,
            synthesis: None,
            graph: None,
        },
    };
    let synthesis_bound = 2 * n * ((1usize << trace.n_targets.min(40)) - 1);
    ledger.bound_check = BoundCheck {
        per_use: max_per_use <= ledger.per_use_bound(),
        preparation: max_per_preparation <= ledger.preparation_bound(),
        logical_gate: max_per_gate <= ledger.gate_bound(),
        synthesis: trace.synthesis_terms.map(|_| eta_lambda <= synthesis_bound),
        graph: trace.graph_edges.map(|e| eta_lambda <= e * n),
    };
    ledger
}
