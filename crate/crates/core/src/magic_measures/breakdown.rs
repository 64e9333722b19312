use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli_core::CliffordTableau;
use crate::statevector::LogicalEnsemble;

use super::basis::{basis_minimized_entropy, measurement_entropy};

/// Which measurement entropy a breakdown report is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakdownBasis {
    #[default]
    Computational,
    /// Per-syndrome minimum over stabilizer bases (small `K` only).
    Minimized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecoderBreakdownReport {
    pub basis: BreakdownBasis,
    /// `(syndrome, Z_s)` with `Z_s = 2^{S_s}`, `S_s` in bits.
    pub z_per_syndrome: Vec<(u64, f64)>,
    /// Born-weighted mean of `S_s` in bits.
    pub mean_entropy: f64,
    /// `exp⟨ln Z_s⟩ = 2^{mean_entropy}`.
    pub z_typical: f64,
    /// Threshold in bits.
    pub epsilon: f64,
    pub breakdown: bool,
}

/// Typical number of logical outcomes consistent with each syndrome, and
/// whether it exceeds the tolerated logical error `epsilon` (bits).
pub fn decoder_breakdown(
    ensemble: &LogicalEnsemble,
    epsilon: f64,
    basis: BreakdownBasis,
) -> Result<DecoderBreakdownReport> {
    let total = ensemble.total_probability();
    if ensemble.entries.is_empty() || total <= 0.0 {
        return Err(Error::EmptySupport);
    }
    let ident = CliffordTableau::identity(ensemble.k);
    let mut z_per_syndrome = Vec::with_capacity(ensemble.entries.len());
    let mut mean = 0.0;
    for e in &ensemble.entries {
        let s = match basis {
            BreakdownBasis::Computational => measurement_entropy(&e.state, &ident)?,
            BreakdownBasis::Minimized => basis_minimized_entropy(&e.state)?,
        };
        mean += e.probability / total * s;
        z_per_syndrome.push((e.syndrome, s.exp2()));
    }
    Ok(DecoderBreakdownReport {
        basis,
        z_per_syndrome,
        mean_entropy: mean,
        z_typical: mean.exp2(),
        epsilon,
        breakdown: epsilon < mean,
    })
}
