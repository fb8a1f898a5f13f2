use serde::{Deserialize, Serialize};

use crate::pauli::PauliAxis;
use crate::simulator::Outcome;

/// How the control register is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// One logical qubit with ideal logical operations.
    Logical,
    /// Every control qubit, with flip schedules and compiled circuits.
    Physical,
}

impl std::str::FromStr for Mode {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "logical" => Ok(Mode::Logical),
            "physical" => Ok(Mode::Physical),
            other => Err(crate::error::Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

/// What a step's flips were spent on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlipCategory {
    Entangling,
    Correction,
    Preparation,
    LogicalGate,
    Idle,
    Readout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    /// Control register returned to `|0_L>` in the all-up frame.
    Reset,
    Prepare {
        eigenstate: String,
    },
    /// Evolution with effective vector `c`, producing `pattern` on the targets.
    Couple {
        c: Vec<f64>,
        pattern: Vec<f64>,
    },
    /// Relabel the logical subspace by flipping control qubits.
    Orient {
        signs: Vec<i8>,
    },
    LogicalGate {
        label: String,
    },
    LogicalRotation {
        axis: PauliAxis,
        angle: f64,
    },
    Measure {
        basis: String,
        outcome: Outcome,
        probability: f64,
    },
    /// Free evolution with the control coupling echoed away.
    Idle,
    /// Pattern evolution with a simultaneous transverse field on the logical qubit.
    ControlField {
        pattern: Vec<f64>,
        omega: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    #[serde(flatten)]
    pub kind: StepKind,
    pub duration: f64,
    pub flips: usize,
    pub category: FlipCategory,
}

/// Ordered log of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTrace {
    pub protocol: String,
    pub mode: Mode,
    pub n_controls: usize,
    pub n_targets: usize,
    pub steps: Vec<Step>,
    pub elapsed: f64,
    pub outcomes: Vec<Outcome>,
    /// Number of multi-qubit phase terms, for phase-synthesis runs.
    pub synthesis_terms: Option<usize>,
    /// Number of edges, for graph-state runs.
    pub graph_edges: Option<usize>,
}

impl ProtocolTrace {
    pub fn new(protocol: &str, mode: Mode, n_controls: usize, n_targets: usize) -> Self {
        ProtocolTrace {
            protocol: protocol.to_string(),
            mode,
            n_controls,
            n_targets,
            steps: Vec::new(),
            elapsed: 0.0,
            outcomes: Vec::new(),
            synthesis_terms: None,
            graph_edges: None,
        }
    }

    pub fn push(&mut self, step: Step) {
        self.elapsed += step.duration;
        if let StepKind::Measure { outcome, .. } = step.kind {
            self.outcomes.push(outcome);
        }
        self.steps.push(step);
    }

    pub fn total_flips(&self) -> usize {
        self.steps.iter().map(|s| s.flips).sum()
    }

    pub fn flips_in(&self, category: FlipCategory) -> usize {
        self.steps.iter().filter(|s| s.category == category).map(|s| s.flips).sum()
    }

    /// Recompute the elapsed time from the log.
    pub fn summed_duration(&self) -> f64 {
        self.steps.iter().map(|s| s.duration).sum()
    }

    pub fn count(&self, pred: impl Fn(&StepKind) -> bool) -> usize {
        self.steps.iter().filter(|s| pred(&s.kind)).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}
