//! Local control of the mediating register: logical gates compiled to
//! physical pulses, decoupling schedules, sequential logical measurement and
//! flip accounting.

mod circuit;
mod decoupling;
mod ledger;
mod walgate;

pub use circuit::{
    cx_pair_time, cx_via_coupling, logical_gate_circuit, logical_plus_prep_circuit, logical_z_rotation, Gate,
    GateCircuit,
};
pub use decoupling::{
    decoupling_schedule, halving_codes, pair_average, pair_isolation_schedule, Decoupling, PairIsolation,
};
pub use ledger::{flip_budget, BoundCheck, ResourceLedger};
pub use walgate::{logical_state, walgate_measurement, walgate_probabilities, Branch, WalgateResult};

use crate::pauli::{PauliAxis, SignedPauli};

/// `(i/2)^k [..[[X, Z], Z].., Z]` with `k` nested commutators: the cycle
/// `X, Y, -X, -Y`.
pub fn nested_commutator_pauli(k: usize) -> SignedPauli {
    let (sign, axis) = match k % 4 {
        0 => (1, PauliAxis::X),
        1 => (1, PauliAxis::Y),
        2 => (-1, PauliAxis::X),
        _ => (-1, PauliAxis::Y),
    };
    SignedPauli { sign, axis }
}

#[cfg(test)]
mod tests;
