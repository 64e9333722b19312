//! Circuit-averaged collision probabilities from the fourth-moment Clifford
//! commutant.
//!
//! The average of `p(x)²` over encoders is a matrix element of the twirl of
//! `(U ⊗ U ⊗ U† ⊗ U†)`, and the twirl lives in the span of `r(T)^{⊗n}` for the
//! 30 commutant elements `T`. The coefficients come from projecting onto that
//! span with the trace inner product.

mod commutant;
mod twirl;

pub use commutant::{all_four_dim_subspaces, enumerate_commutant_basis, CommutantElement, COMMUTANT_SIZE};
pub use twirl::{
    analytic_renyi_conditional, analytic_renyi_row, expected_collision_from, expected_collision_probability,
    expected_collision_product_form, single_qubit_observable, twirl_coefficients, write_analytic_csv,
    AnalyticRenyiRow, TwirlCoefficients, CONDITION_WARN,
};
