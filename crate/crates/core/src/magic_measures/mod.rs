//! Magic and entropy observables. Every logarithm is base 2.

mod basis;
mod breakdown;
mod entropy;
mod report;
mod ssre;

pub use basis::{
    basis_minimized_entropy, basis_minimized_entropy_with_cap, generator_distribution,
    measurement_entropy, stabilizer_bases, StabilizerBasis, BASIS_MIN_MAX_QUBITS,
};
pub use breakdown::{decoder_breakdown, BreakdownBasis, DecoderBreakdownReport};
pub use entropy::{
    collision_probability, conditional_entropy, cross_collision_entropy, cross_entropy_postprocess,
    renyi_conditional_entropy, shannon_entropy,
};
pub use report::{
    basis_minimized_conditional_entropy, magic_report, syndrome_average, MagicOptions, MagicReport,
    SyndromeMagic, SyndromeWeighting,
};
pub use ssre::{pauli_fourth_moment, ssre, SSRE_MAX_QUBITS};
