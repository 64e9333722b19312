use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::classify::{classify_syndromes, ActionKind, SyndromePairClassification};
use crate::error::{Error, Result};
use crate::magic_measures::{ssre, SyndromeWeighting};
use crate::pauli_core::{CliffordTableau, Pauli};
use crate::statevector::{times_i_pow, StateVector, PROB_FLOOR};

/// Amplitude of a weight-`w` error pattern: `cos^{N−w}(α/2) (−i sin(α/2))^w`.
pub fn error_amplitude(n: usize, w: u32, alpha: f64) -> Complex64 {
    let (s, c) = (alpha / 2.0).sin_cos();
    let mag = c.powi(n as i32 - w as i32) * s.powi(w as i32);
    times_i_pow(Complex64::new(mag, 0.0), ((4 - w % 4) % 4) as u8)
}

/// `σ|0⟩` for a Hermitian single-qubit Pauli, as (basis index, phase power).
fn act_on_zero(p: Pauli) -> (usize, u8) {
    match p {
        Pauli::I | Pauli::Z => (0, 0),
        Pauli::X => (1, 0),
        Pauli::Y => (1, 1),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictedLogical {
    /// Normalized logical state.
    pub state: StateVector,
    /// Probability of the syndrome.
    pub probability: f64,
    /// SSRE in bits.
    pub m2: f64,
}

/// Exact post-measurement logical state for one classified syndrome,
/// `w_a i^{ζ_a} σ_a|0⟩ + w_b i^{ζ_b} σ_b|0⟩`, built for either kind.
pub fn predicted_logical_state(c: &SyndromePairClassification, alpha: f64) -> Result<PredictedLogical> {
    let mut amps = [Complex64::new(0.0, 0.0); 2];
    for (w, zeta, sigma) in [(c.n_a, c.zeta_a, c.sigma_a), (c.n_b, c.zeta_b, c.sigma_b)] {
        let (idx, ph) = act_on_zero(sigma);
        amps[idx] += times_i_pow(error_amplitude(c.n, w, alpha), (zeta + ph) & 3);
    }
    let probability = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
    if probability < PROB_FLOOR {
        return Err(Error::EmptySupport);
    }
    let mut state = StateVector::from_amplitudes(amps.to_vec())?;
    state.normalize()?;
    let m2 = ssre(&state)?.max(0.0);
    Ok(PredictedLogical {
        state,
        probability,
        m2,
    })
}

/// Leading-order reference value `Δ² ε²` (natural-log units) for one syndrome.
pub fn taylor_m2_nats(delta: i32, epsilon: f64) -> f64 {
    (delta as f64 * epsilon).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragedM2Prediction {
    pub nats: f64,
    pub bits: f64,
    /// `ε √N`.
    pub scaling_x: f64,
}

/// Leading-order circuit-averaged SSRE `N ε² / 4` near the Clifford point.
pub fn averaged_m2_prediction(n: usize, epsilon: f64) -> AveragedM2Prediction {
    let nats = n as f64 * epsilon * epsilon / 4.0;
    AveragedM2Prediction {
        nats,
        bits: nats / std::f64::consts::LN_2,
        scaling_x: epsilon.abs() * (n as f64).sqrt(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyndromePrediction {
    pub syndrome: u64,
    pub probability: f64,
    pub m2: f64,
}

/// Per-syndrome and averaged SSRE of one encoder at one angle, from the
/// classification alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingPrediction {
    pub n: usize,
    pub alpha: f64,
    /// `π/2 − α`.
    pub epsilon: f64,
    pub per_syndrome_m2: Vec<SyndromePrediction>,
    /// Syndrome average in bits.
    pub averaged_m2: f64,
    /// `ε √N`.
    pub scaling_x: f64,
}

pub fn vanishing_prediction_from(
    classes: &[SyndromePairClassification],
    alpha: f64,
    weighting: SyndromeWeighting,
) -> Result<VanishingPrediction> {
    let n = classes.first().map(|c| c.n).ok_or(Error::EmptySupport)?;
    let mut per = Vec::with_capacity(classes.len());
    for c in classes {
        match predicted_logical_state(c, alpha) {
            Ok(p) => per.push(SyndromePrediction {
                syndrome: c.syndrome,
                probability: p.probability,
                m2: p.m2,
            }),
            Err(Error::EmptySupport) => {}
            Err(e) => return Err(e),
        }
    }
    let (mut acc, mut norm) = (0.0, 0.0);
    for p in &per {
        let w = match weighting {
            SyndromeWeighting::Born => p.probability,
            SyndromeWeighting::Uniform => 1.0,
        };
        acc += w * p.m2;
        norm += w;
    }
    let epsilon = std::f64::consts::FRAC_PI_2 - alpha;
    Ok(VanishingPrediction {
        n,
        alpha,
        epsilon,
        per_syndrome_m2: per,
        averaged_m2: acc / norm,
        scaling_x: epsilon.abs() * (n as f64).sqrt(),
    })
}

pub fn vanishing_prediction(encoder: &CliffordTableau, alpha: f64) -> Result<VanishingPrediction> {
    vanishing_prediction_from(&classify_syndromes(encoder)?, alpha, SyndromeWeighting::Born)
}

/// Groups syndromes whose predicted logical states agree up to global phase
/// (`1 − |⟨ψ|φ⟩| < 1e-9`). Syndromes of zero probability get no class.
pub fn group_syndrome_classes(encoder: &CliffordTableau, alpha: f64) -> Result<BTreeMap<u64, usize>> {
    group_classes_from(&classify_syndromes(encoder)?, alpha)
}

pub fn group_classes_from(
    classes: &[SyndromePairClassification],
    alpha: f64,
) -> Result<BTreeMap<u64, usize>> {
    const TOL: f64 = 1e-9;
    let mut reps: Vec<StateVector> = Vec::new();
    let mut out = BTreeMap::new();
    for c in classes {
        let p = match predicted_logical_state(c, alpha) {
            Ok(p) => p,
            Err(Error::EmptySupport) => continue,
            Err(e) => return Err(e),
        };
        let id = match reps.iter().position(|r| 1.0 - r.inner(&p.state).norm() < TOL) {
            Some(id) => id,
            None => {
                reps.push(p.state);
                reps.len() - 1
            }
        };
        out.insert(c.syndrome, id);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub id: usize,
    /// Number of syndromes in the class.
    pub size: usize,
    /// Total probability of the class.
    pub probability: f64,
    /// SSRE of the shared logical state, bits.
    pub m2: f64,
}

pub fn class_summaries(classes: &[SyndromePairClassification], alpha: f64) -> Result<Vec<ClassSummary>> {
    let ids = group_classes_from(classes, alpha)?;
    let mut out: Vec<ClassSummary> = Vec::new();
    for c in classes {
        let Some(&id) = ids.get(&c.syndrome) else {
            continue;
        };
        let p = predicted_logical_state(c, alpha)?;
        if id == out.len() {
            out.push(ClassSummary {
                id,
                size: 0,
                probability: 0.0,
                m2: p.m2,
            });
        }
        out[id].size += 1;
        out[id].probability += p.probability;
    }
    Ok(out)
}

/// Class-size weighted mean SSRE `Σ |s̄| M2(s̄) / Σ |s̄|`.
pub fn class_weighted_m2(summaries: &[ClassSummary]) -> f64 {
    let total: usize = summaries.iter().map(|c| c.size).sum();
    summaries.iter().map(|c| c.size as f64 * c.m2).sum::<f64>() / total as f64
}

/// CSV rows `syndrome,n_a,n_b,kind,m,m2` for one angle.
pub fn write_classification_csv<W: Write>(
    w: W,
    classes: &[SyndromePairClassification],
    alpha: f64,
) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["syndrome", "n_a", "n_b", "kind", "m", "m2"])?;
    for c in classes {
        let m2 = match predicted_logical_state(c, alpha) {
            Ok(p) => p.m2.to_string(),
            Err(Error::EmptySupport) => String::new(),
            Err(e) => return Err(e),
        };
        let kind = match c.kind {
            ActionKind::Unitary => "unitary",
            ActionKind::Projector => "projector",
        };
        wr.write_record([
            c.syndrome.to_string(),
            c.n_a.to_string(),
            c.n_b.to_string(),
            kind.to_string(),
            c.m.to_string(),
            m2,
        ])?;
    }
    wr.flush()?;
    Ok(())
}
