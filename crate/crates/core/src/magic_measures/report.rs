use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{born_table, logical_ensemble, LogicalEnsemble, StateVector, SyndromeMode};

use super::basis::{basis_minimized_entropy, BASIS_MIN_MAX_QUBITS};
use super::entropy::{conditional_entropy, renyi_conditional_entropy};
use super::ssre::{ssre, SSRE_MAX_QUBITS};

/// How per-syndrome values are averaged into one number per circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyndromeWeighting {
    /// Weighted by the probability of observing each syndrome.
    #[default]
    Born,
    /// Plain mean over the syndromes present in the ensemble.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagicOptions {
    pub weighting: SyndromeWeighting,
    pub syndromes: SyndromeMode,
    /// Skip the SSRE (and the logical ensemble) entirely when false.
    pub compute_m2: bool,
    /// Also compute the basis-minimized conditional entropy when `K` allows.
    pub basis_minimized: bool,
    pub keep_per_syndrome: bool,
}

impl Default for MagicOptions {
    fn default() -> Self {
        Self {
            weighting: SyndromeWeighting::Born,
            syndromes: SyndromeMode::default(),
            compute_m2: true,
            basis_minimized: false,
            keep_per_syndrome: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyndromeMagic {
    pub syndrome: u64,
    pub probability: f64,
    pub m2: f64,
}

/// Per-circuit magic observables, all in bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicReport {
    pub m2: Option<f64>,
    pub cond_shannon: f64,
    pub cond_renyi: f64,
    pub cond_minimized: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_syndrome: Option<Vec<SyndromeMagic>>,
}

/// Average of `f` over the ensemble under the chosen weighting.
pub fn syndrome_average<F>(ensemble: &LogicalEnsemble, weighting: SyndromeWeighting, mut f: F) -> Result<f64>
where
    F: FnMut(&StateVector) -> Result<f64>,
{
    if ensemble.entries.is_empty() {
        return Err(Error::EmptySupport);
    }
    let (mut acc, mut norm) = (0.0, 0.0);
    for e in &ensemble.entries {
        let w = match weighting {
            SyndromeWeighting::Born => e.probability,
            SyndromeWeighting::Uniform => 1.0,
        };
        acc += w * f(&e.state)?;
        norm += w;
    }
    Ok(acc / norm)
}

/// `Σ_s p(s) min_B S(ℓ_B | s)` in bits.
pub fn basis_minimized_conditional_entropy(ensemble: &LogicalEnsemble) -> Result<f64> {
    syndrome_average(ensemble, SyndromeWeighting::Born, basis_minimized_entropy)
}

/// All magic observables of a pipeline state with logical sites `0..k`.
pub fn magic_report(state: &StateVector, k: usize, opts: &MagicOptions) -> Result<MagicReport> {
    let n = state.num_qubits();
    let joint = born_table(state, &(0..n).collect::<Vec<_>>())?;
    let cond_shannon = conditional_entropy(&joint, k)?;
    let cond_renyi = renyi_conditional_entropy(&joint, k)?;
    let want_min = opts.basis_minimized && k <= BASIS_MIN_MAX_QUBITS;
    let want_m2 = opts.compute_m2 && k <= SSRE_MAX_QUBITS;
    let mut report = MagicReport {
        m2: None,
        cond_shannon,
        cond_renyi,
        cond_minimized: None,
        per_syndrome: None,
    };
    if !(want_m2 || want_min) {
        return Ok(report);
    }
    let ensemble = logical_ensemble(state, k, opts.syndromes)?;
    if want_m2 {
        let values = ensemble
            .entries
            .iter()
            .map(|e| ssre(&e.state))
            .collect::<Result<Vec<_>>>()?;
        let mut it = values.iter();
        report.m2 = Some(syndrome_average(&ensemble, opts.weighting, |_| {
            Ok(*it.next().expect("one value per entry"))
        })?);
        if opts.keep_per_syndrome {
            report.per_syndrome = Some(
                ensemble
                    .entries
                    .iter()
                    .zip(&values)
                    .map(|(e, &m2)| SyndromeMagic {
                        syndrome: e.syndrome,
                        probability: e.probability,
                        m2,
                    })
                    .collect(),
            );
        }
    }
    if want_min {
        report.cond_minimized = Some(basis_minimized_conditional_entropy(&ensemble)?);
    }
    Ok(report)
}
