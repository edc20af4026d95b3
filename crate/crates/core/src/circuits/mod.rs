//! Circuit IR, the gate library and the structured builders.

mod builders;
mod gates;
mod ir;
mod qasm;
mod unitary;

pub use builders::{
    ancilla_wire, increment_circuit, multiplexed_circuit_powers, multiplexed_powers, phase_block, qft_circuit,
    ORDER_TOL,
};
pub use gates::{controlled, phase_matrix, qct4_gate, standard_gate, GateConstant, NamedGate};
pub use ir::{Circuit, GateKind, GateOp};
pub use qasm::{export_qasm, import_qasm, u3_angles, u3_matrix};
pub use unitary::circuit_unitary;
