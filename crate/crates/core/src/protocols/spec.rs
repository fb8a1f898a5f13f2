use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logical::{flip_budget, ResourceLedger};
use crate::pattern::InteractionPattern;
use crate::simulator::{PureState, Register};

use super::device::Device;
use super::engine::{Branching, Engine};
use super::library::*;
use super::trace::{Mode, ProtocolTrace};

/// A protocol and its parameters; target indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum ProtocolSpec {
    GateSequence {
        subset: Vec<usize>,
        omega: f64,
    },
    Synthesis {
        table: PhaseTable,
    },
    MeasurementCz {
        subset: Vec<usize>,
    },
    Graph {
        edges: Vec<(usize, usize)>,
    },
    DfGhz {
        order: Vec<usize>,
    },
    ControlRotation {
        pair: (usize, usize),
        phi: f64,
        #[serde(default)]
        trotter_steps: Option<usize>,
    },
    ControlRotationThree {
        triple: [usize; 3],
    },
    AlternatingBell {
        pair: (usize, usize),
    },
    Commutator {
        lambda: Vec<f64>,
        mu: Vec<f64>,
        time: f64,
        cycles: usize,
    },
    SelfInteraction {
        time: f64,
        #[serde(default = "yes")]
        modular: bool,
    },
}

fn yes() -> bool {
    true
}

impl ProtocolSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ProtocolSpec::GateSequence { .. } => "gate_sequence",
            ProtocolSpec::Synthesis { .. } => "synthesis",
            ProtocolSpec::MeasurementCz { .. } => "measurement_cz",
            ProtocolSpec::Graph { .. } => "graph",
            ProtocolSpec::DfGhz { .. } => "df_ghz",
            ProtocolSpec::ControlRotation { .. } => "control_rotation",
            ProtocolSpec::ControlRotationThree { .. } => "control_rotation_three",
            ProtocolSpec::AlternatingBell { .. } => "alternating_bell",
            ProtocolSpec::Commutator { .. } => "commutator",
            ProtocolSpec::SelfInteraction { .. } => "self_interaction",
        }
    }
}

/// Outcome of [`run_protocol`].
#[derive(Debug, Clone, Serialize)]
pub struct ProtocolRun {
    pub trace: ProtocolTrace,
    pub ledger: ResourceLedger,
    /// Overlap of the targets' reduced state with the ideal result.
    pub fidelity: f64,
    /// Spins recorded by the GHZ protocol.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spins: Option<Vec<i8>>,
    /// Stabilizer expectations for graph states.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizers: Option<Vec<f64>>,
    #[serde(skip)]
    pub state: PureState,
    #[serde(skip)]
    pub target: PureState,
}

/// Run `spec` from `|0_L>|+>^n` and compare with its ideal result.
pub fn run_protocol(device: &Device, mode: Mode, branching: Branching, spec: &ProtocolSpec) -> Result<ProtocolRun> {
    let n = device.n_targets();
    let mut e = Engine::new(device, mode, branching, spec.name())?;
    let plus = PureState::plus(Register::Physical { controls: 0, targets: n })?;
    let mut spins = None;
    let target = match spec {
        ProtocolSpec::GateSequence { subset, omega } => {
            gate_sequence_multi_z(&mut e, subset, *omega)?;
            multi_z_target(&plus, subset, *omega)?
        }
        ProtocolSpec::Synthesis { table } => {
            diagonal_state_synthesis(&mut e, table)?;
            table.apply(&plus)?
        }
        ProtocolSpec::MeasurementCz { subset } => {
            measurement_cz(&mut e, subset)?;
            let mut t = plus.clone();
            for (k, &a) in subset.iter().enumerate() {
                for &b in &subset[k + 1..] {
                    t.apply_cz(a, b)?;
                }
            }
            t
        }
        ProtocolSpec::Graph { edges } => {
            graph_state_prep(&mut e, edges)?;
            graph_state(n, edges)?
        }
        ProtocolSpec::DfGhz { order } => {
            let s = df_ghz_prep(&mut e, order)?;
            let t = ghz_state(n, order, &s)?;
            spins = Some(s);
            t
        }
        ProtocolSpec::ControlRotation {
            pair,
            phi,
            trotter_steps,
        } => {
            control_rotation_entangler(&mut e, *pair, *phi, *trotter_steps)?;
            zz_target(&plus, &[*pair], *phi)?
        }
        ProtocolSpec::ControlRotationThree { triple } => {
            control_rotation_three_qubit(&mut e, *triple)?;
            let [a, b, c] = *triple;
            zz_target(&plus, &[(a, b), (a, c), (b, c)], std::f64::consts::FRAC_PI_4)?
        }
        ProtocolSpec::AlternatingBell { pair } => {
            alternating_pattern_bell(&mut e, *pair, std::f64::consts::FRAC_PI_4)?;
            alternating_bell_state(n, *pair)?
        }
        ProtocolSpec::Commutator {
            lambda,
            mu,
            time,
            cycles,
        } => {
            let l = InteractionPattern::new(lambda.clone())?;
            let m = InteractionPattern::new(mu.clone())?;
            commutator_three_body(&mut e, &l, &m, *time, *cycles)?;
            commutator_target(&plus, lambda, mu, *time)?
        }
        ProtocolSpec::SelfInteraction { time, modular } => {
            self_interaction_cancellation(&mut e, *time, *modular)?;
            plus.clone()
        }
    };
    let keep = e.target_qubits();
    let (trace, state) = e.into_parts();
    let fidelity = state.fidelity(&target, &keep)?;
    let stabilizers = match spec {
        ProtocolSpec::Graph { edges } => Some(graph_stabilizers(&state.reduced_density(&keep)?, edges)?),
        _ => None,
    };
    let ledger = flip_budget(&trace);
    Ok(ProtocolRun {
        trace,
        ledger,
        fidelity,
        spins,
        stabilizers,
        state,
        target,
    })
}

/// Limit of the commutator protocol: pair rates `2 (lambda_a mu_b + lambda_b mu_a)`.
pub fn commutator_target(psi: &PureState, lambda: &[f64], mu: &[f64], t: f64) -> Result<PureState> {
    let n = psi.num_qubits();
    if lambda.len() != n || mu.len() != n {
        return Err(Error::DimensionMismatch("pattern length differs from target count".into()));
    }
    let mut table = PhaseTable::new(n);
    for a in 0..n {
        for b in a + 1..n {
            let j = 2.0 * (lambda[a] * mu[b] + lambda[b] * mu[a]);
            if j != 0.0 {
                table.insert(&[a, b], j * t)?;
            }
        }
    }
    table.apply(psi)
}
