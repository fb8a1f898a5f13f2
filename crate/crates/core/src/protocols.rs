//! Entangling procedures on the target register, executed either on the
//! logical control qubit or on the full physical control register.

mod device;
mod engine;
mod heisenberg;
mod library;
mod spec;
mod trace;

pub use device::{Device, TimingModel};
pub use engine::{Branching, Engine};
pub use heisenberg::{expm_hermitian, heisenberg_to_zz, HeisenbergRun, XyzCouplings};
pub use library::{
    alternating_bell_state, alternating_pattern_bell, check_edges, commutator_three_body,
    control_rotation_entangler, control_rotation_parameters, control_rotation_three_qubit, df_ghz_prep,
    diagonal_state_synthesis, equal_orientation, fit_zz_rate, gate_sequence_control, gate_sequence_multi_z,
    ghz_state, graph_stabilizers, graph_state, graph_state_prep, measurement_cz, multi_z_target, reduce_phase,
    self_interaction_cancellation, three_qubit_parameters, zz_target, PhaseTable,
};
pub use spec::{commutator_target, run_protocol, ProtocolRun, ProtocolSpec};
pub use trace::{FlipCategory, Mode, ProtocolTrace, Step, StepKind};
