use std::io::Write;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::StateVector;
use crate::error::{Error, Result};

/// Probabilities below this are treated as exact zeros.
pub const PROB_FLOOR: f64 = 1e-15;

/// Exact outcome distribution over an ordered register.
///
/// Entry `k` is the probability of the outcome whose bit `i` is the value
/// measured on `register[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BornTable {
    register: Vec<usize>,
    probs: Vec<f64>,
}

impl BornTable {
    pub fn new(register: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << register.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << register.len(),
                got: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad probability {p}")));
        }
        Ok(Self { register, probs })
    }

    /// A table over `bits` anonymous positions `0..bits`.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if !probs.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "table length {} is not a power of two",
                probs.len()
            )));
        }
        let bits = probs.len().trailing_zeros() as usize;
        Self::new((0..bits).collect(), probs)
    }

    pub fn register(&self) -> &[usize] {
        &self.register
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Marginal over the register positions listed in `keep` (indices into
    /// the register, not sites), in that order.
    pub fn marginal(&self, keep: &[usize]) -> Result<BornTable> {
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.register.len()) {
            return Err(Error::InvalidArgument(format!(
                "register position {bad} out of range"
            )));
        }
        let mut out = vec![0.0; 1 << keep.len()];
        for (k, &p) in self.probs.iter().enumerate() {
            out[gather(k, keep)] += p;
        }
        BornTable::new(keep.iter().map(|&i| self.register[i]).collect(), out)
    }

    /// Outcome label with register position 0 as the rightmost character.
    pub fn bitstring(&self, outcome: usize) -> String {
        let w = self.register.len();
        if w == 0 {
            return String::new();
        }
        format!("{outcome:0w$b}")
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["bitstring", "probability"])?;
        for (k, p) in self.probs.iter().enumerate() {
            wr.write_record([self.bitstring(k), format!("{p:.17e}")])?;
        }
        wr.flush()?;
        Ok(())
    }
}

/// Packs bits `positions[i]` of `k` into bit `i` of the result.
#[inline]
pub(crate) fn gather(k: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &p)| acc | ((k >> p) & 1) << i)
}

/// Exact marginal distribution of computational-basis outcomes on `register`.
pub fn born_table(state: &StateVector, register: &[usize]) -> Result<BornTable> {
    let n = state.num_qubits();
    let mut seen = vec![false; n];
    for &s in register {
        if s >= n || seen[s] {
            return Err(Error::InvalidArgument(format!(
                "register site {s} repeated or out of range"
            )));
        }
        seen[s] = true;
    }
    let mut probs = vec![0.0; 1 << register.len()];
    let contiguous = register.iter().enumerate().all(|(i, &s)| i == s);
    for (k, a) in state.amplitudes().iter().enumerate() {
        let idx = if contiguous {
            k & ((1 << register.len()) - 1)
        } else {
            gather(k, register)
        };
        probs[idx] += a.norm_sqr();
    }
    BornTable::new(register.to_vec(), probs)
}

/// How to visit syndromes when building a logical ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyndromeMode {
    /// Every syndrome with nonzero probability; refuses more than `2^max_bits`.
    Enumerate { max_bits: usize },
    /// `count` draws from the exact syndrome distribution, with multiplicity.
    Sample { count: usize, seed: u64 },
}

impl Default for SyndromeMode {
    fn default() -> Self {
        SyndromeMode::Enumerate { max_bits: 20 }
    }
}

#[derive(Clone, Debug)]
pub struct LogicalEntry {
    /// Outcome on sites `k..n`, site `k` in bit 0.
    pub syndrome: u64,
    pub probability: f64,
    pub state: StateVector,
}

/// Post-measurement logical states, one per syndrome.
#[derive(Clone, Debug)]
pub struct LogicalEnsemble {
    pub k: usize,
    pub entries: Vec<LogicalEntry>,
}

impl LogicalEnsemble {
    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

/// Splits the pipeline state into syndrome blocks. Logical qubits are sites
/// `0..k` and the measured register is `k..n`.
pub fn logical_ensemble(state: &StateVector, k: usize, mode: SyndromeMode) -> Result<LogicalEnsemble> {
    let n = state.num_qubits();
    if k >= n || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "logical count {k} must lie in 1..{n}"
        )));
    }
    let block = 1usize << k;
    let amps = state.amplitudes();
    let syn_probs: Vec<f64> = amps
        .chunks_exact(block)
        .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
        .collect();
    let make = |s: usize, weight: f64| -> Result<LogicalEntry> {
        let p = syn_probs[s];
        let norm = p.sqrt();
        let v: Vec<Complex64> = amps[s * block..(s + 1) * block]
            .iter()
            .map(|a| a / norm)
            .collect();
        Ok(LogicalEntry {
            syndrome: s as u64,
            probability: weight,
            state: StateVector::from_amplitudes(v)?,
        })
    };
    let entries = match mode {
        SyndromeMode::Enumerate { max_bits } => {
            if n - k > max_bits {
                return Err(Error::ResourceLimit {
                    what: "syndrome enumeration",
                    requested: n - k,
                    cap: max_bits,
                });
            }
            (0..syn_probs.len())
                .filter(|&s| syn_probs[s] >= PROB_FLOOR)
                .map(|s| make(s, syn_probs[s]))
                .collect::<Result<Vec<_>>>()?
        }
        SyndromeMode::Sample { count, seed } => {
            if count == 0 {
                return Err(Error::InvalidArgument("sample count must be positive".into()));
            }
            let dist = WeightedIndex::new(&syn_probs)
                .map_err(|e| Error::InvalidArgument(format!("syndrome distribution: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = 1.0 / count as f64;
            (0..count)
                .map(|_| make(dist.sample(&mut rng), w))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(LogicalEnsemble { k, entries })
}
