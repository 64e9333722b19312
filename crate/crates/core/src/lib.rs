//! Magic in random Clifford codes subject to coherent `Rz(α)` errors.
//!
//! The pipeline is `|0^N⟩ → C → ⊗Rz(α) → C† → measure N−K qubits`, with `C` a
//! random encoder of single-qubit Cliffords and Mølmer–Sørensen layers. The
//! crate provides
//!
//! - [`pauli_core`]: Pauli strings, Clifford tableaux, encoder sampling, GF(2)
//!   syndrome maps;
//! - [`statevector`]: dense simulation of the pipeline and Born tables;
//! - [`magic_measures`]: stabilizer Rényi entropy, measurement entropies,
//!   conditional entropies, decoder breakdown and cross-entropy estimates;
//! - [`vanishing_rate`]: exact two-error analysis of single-logical-qubit codes;
//! - [`schur_weyl`]: fourth-moment Clifford commutant and the averaged
//!   collision probabilities it implies;
//! - [`scaling_analysis`]: finite-size scaling collapse, jackknife and bootstrap;
//! - [`harness`]: configuration-driven sweeps and experiment ingestion.
//!
//! Qubit `j` is bit `j` of a basis-state index (qubit 0 least significant).
//! Logical qubits are sites `0..K`, syndrome qubits `K..N`. Entropies are in
//! bits unless a name says otherwise.

pub mod error;
pub mod harness;
pub mod magic_measures;
pub mod pauli_core;
pub mod scaling_analysis;
pub mod schur_weyl;
pub mod statevector;
pub mod vanishing_rate;

pub use error::{Error, Result};
