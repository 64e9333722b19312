//! Symplectic GF(2) algebra: Pauli strings, Clifford tableaux, encoder
//! sampling and the linear syndrome map of a code.

mod circuit;
mod gf2;
mod pauli;
mod tableau;

pub use circuit::{circuit_to_tableau, derive_seed, sample_encoder, CircuitSpec, Layer};
pub use gf2::{errors_per_syndrome, syndrome_map, ErrorsPerSyndrome, Gf2Matrix, SyndromeMap};
pub use pauli::{Pauli, PauliString};
pub use tableau::{
    enumerate_single_qubit_cliffords, single_qubit_cliffords, CliffordTableau,
    SingleQubitClifford,
};

/// Convenience alias: `C† p C`.
pub fn conjugate_pauli(t: &CliffordTableau, p: &PauliString) -> crate::Result<PauliString> {
    t.conjugate(p)
}
