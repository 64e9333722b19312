//! Dense simulation of encode, rotate, decode and the measurement statistics
//! that follow.

mod born;
mod state;

pub use born::{
    born_table, logical_ensemble, BornTable, LogicalEnsemble, LogicalEntry, SyndromeMode, PROB_FLOOR,
};
pub(crate) use state::{pauli_expectation_raw, times_i_pow};
pub use state::{
    adjoint2, adjoint4, ms_matrix, run_model_circuit, ErrorExpansion, Mat2, Mat4, StateVector,
    DEFAULT_MAX_QUBITS,
};
