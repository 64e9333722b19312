use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magic_measures::{cross_collision_entropy, cross_entropy_postprocess};
use crate::pauli_core::{circuit_to_tableau, derive_seed, sample_encoder, CircuitSpec};
use crate::scaling_analysis::{bootstrap_stderr, BootstrapResult, DEFAULT_RESAMPLES, DEFAULT_RESAMPLE_SIZE};
use crate::statevector::{born_table, ErrorExpansion};

/// Measured outcomes of one hardware circuit. Bitstrings are written with
/// qubit 0 as the rightmost character.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentFile {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: f64,
    pub counts: BTreeMap<String, u64>,
    /// Circuit as run; checked against the replay from `seed` when present.
    #[serde(default)]
    pub circuit: Option<CircuitSpec>,
}

impl ExperimentFile {
    pub fn counts_by_index(&self) -> Result<BTreeMap<u64, u64>> {
        let mut out = BTreeMap::new();
        for (bits, &c) in &self.counts {
            if bits.len() != self.n || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::Parse(format!("bad bitstring {bits:?} for n = {}", self.n)));
            }
            let x = u64::from_str_radix(bits, 2).map_err(|e| Error::Parse(e.to_string()))?;
            *out.entry(x).or_insert(0) += c;
        }
        if out.values().sum::<u64>() == 0 {
            return Err(Error::EmptySupport);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestRecord {
    pub file: String,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub shots: u64,
    /// Conditional cross-entropy `S_X(joint) − S_X(syndrome)` in bits.
    pub shannon: f64,
    /// Collision analogue of `shannon`.
    pub renyi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestFailure {
    pub file: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub n: usize,
    pub alpha: f64,
    pub circuits: usize,
    pub shannon: BootstrapResult,
    pub renyi: BootstrapResult,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestOutput {
    pub records: Vec<IngestRecord>,
    pub failures: Vec<IngestFailure>,
    pub summaries: Vec<IngestSummary>,
}

/// Replays one experiment and scores its counts against the ideal outcome
/// distribution.
pub fn process_experiment(exp: &ExperimentFile, label: &str) -> Result<IngestRecord> {
    if exp.k == 0 || exp.k >= exp.n {
        return Err(Error::InvalidArgument(format!("k = {} with n = {}", exp.k, exp.n)));
    }
    let spec = sample_encoder(exp.n, exp.d, exp.seed)?;
    if let Some(given) = &exp.circuit {
        if *given != spec {
            return Err(Error::SeedMismatch(format!(
                "circuit in {label} differs from the replay of seed {}",
                exp.seed
            )));
        }
    }
    let state = ErrorExpansion::new(&circuit_to_tableau(&spec))?.state(exp.alpha);
    let joint = born_table(&state, &(0..exp.n).collect::<Vec<_>>())?;
    let syndrome = joint.marginal(&(exp.k..exp.n).collect::<Vec<_>>())?;
    let counts = exp.counts_by_index()?;
    let mut syn_counts = BTreeMap::new();
    for (&x, &c) in &counts {
        *syn_counts.entry(x >> exp.k).or_insert(0) += c;
    }
    Ok(IngestRecord {
        file: label.to_string(),
        seed: exp.seed,
        n: exp.n,
        k: exp.k,
        alpha: exp.alpha,
        shots: counts.values().sum(),
        shannon: cross_entropy_postprocess(&counts, &joint)? - cross_entropy_postprocess(&syn_counts, &syndrome)?,
        renyi: cross_collision_entropy(&counts, &joint)? - cross_collision_entropy(&syn_counts, &syndrome)?,
    })
}

fn load(path: &Path) -> Result<ExperimentFile> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// Processes each file independently; a bad file is reported in `failures`
/// and does not stop the batch.
pub fn ingest_experiment(paths: &[PathBuf], bootstrap_seed: u64) -> Result<IngestOutput> {
    let mut out = IngestOutput::default();
    for path in paths {
        let label = path.display().to_string();
        match load(path).and_then(|exp| process_experiment(&exp, &label)) {
            Ok(rec) => out.records.push(rec),
            Err(e) => {
                log::warn!("{label}: {e}");
                out.failures.push(IngestFailure { file: label, message: e.to_string() });
            }
        }
    }
    out.summaries = summarize(&out.records, bootstrap_seed)?;
    Ok(out)
}

/// Bootstrap error bars per (n, α).
pub fn summarize(records: &[IngestRecord], seed: u64) -> Result<Vec<IngestSummary>> {
    let mut groups: BTreeMap<(usize, u64), Vec<&IngestRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.alpha.to_bits())).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((n, a), recs)| {
            let s = derive_seed(seed, &[n as u64, a]);
            let sh: Vec<f64> = recs.iter().map(|r| r.shannon).collect();
            let re: Vec<f64> = recs.iter().map(|r| r.renyi).collect();
            Ok(IngestSummary {
                n,
                alpha: f64::from_bits(a),
                circuits: recs.len(),
                shannon: bootstrap_stderr(&sh, DEFAULT_RESAMPLES, DEFAULT_RESAMPLE_SIZE, s)?,
                renyi: bootstrap_stderr(&re, DEFAULT_RESAMPLES, DEFAULT_RESAMPLE_SIZE, s ^ 1)?,
            })
        })
        .collect()
}

pub fn write_ingest_csv<W: Write>(w: W, records: &[IngestRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}
