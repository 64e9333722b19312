use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tableau::{single_qubit_cliffords, CliffordTableau};
use crate::error::{Error, Result};

/// One layer of the encoder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    /// Index (into the canonical 24-element order) of the Clifford on each site.
    Single(Vec<u8>),
    /// Disjoint pairs receiving `MS(π/2)`.
    Entangling(Vec<(usize, usize)>),
}

/// A replayable encoder circuit: `d` single-qubit layers interleaved with `d`
/// Mølmer–Sørensen layers on random perfect matchings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub layers: Vec<Layer>,
}

impl CircuitSpec {
    /// Empty circuit (identity encoder).
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            d: 0,
            seed: 0,
            layers: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for layer in &self.layers {
            match layer {
                Layer::Single(idx) => {
                    if idx.len() != self.n {
                        return Err(Error::DimensionMismatch {
                            expected: self.n,
                            got: idx.len(),
                        });
                    }
                    if let Some(bad) = idx.iter().find(|&&i| i >= 24) {
                        return Err(Error::InvalidArgument(format!(
                            "single-qubit Clifford index {bad} out of range"
                        )));
                    }
                }
                Layer::Entangling(pairs) => {
                    let mut hit = vec![false; self.n];
                    for &(a, b) in pairs {
                        for s in [a, b] {
                            if s >= self.n || hit[s] {
                                return Err(Error::InvalidArgument(format!(
                                    "entangling layer is not a matching (site {s})"
                                )));
                            }
                            hit[s] = true;
                        }
                    }
                    if hit.iter().any(|h| !h) {
                        return Err(Error::InvalidArgument(
                            "entangling layer does not cover every site".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: CircuitSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Samples an encoder; deterministic in `(n, d, seed)`.
pub fn sample_encoder(n: usize, d: usize, seed: u64) -> Result<CircuitSpec> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "qubit count must be even and at least 2 (got {n})"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layers = Vec::with_capacity(2 * d);
    let mut sites: Vec<usize> = (0..n).collect();
    for _ in 0..d {
        layers.push(Layer::Single((0..n).map(|_| rng.gen_range(0..24u8)).collect()));
        sites.shuffle(&mut rng);
        let pairs = sites.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        layers.push(Layer::Entangling(pairs));
    }
    Ok(CircuitSpec { n, d, seed, layers })
}

/// Tableau of the whole encoder, layers applied in order.
pub fn circuit_to_tableau(spec: &CircuitSpec) -> CliffordTableau {
    let cliffords = single_qubit_cliffords();
    let ms = CliffordTableau::molmer_sorensen();
    let mut t = CliffordTableau::identity(spec.n);
    for layer in &spec.layers {
        match layer {
            Layer::Single(idx) => {
                for (site, &g) in idx.iter().enumerate() {
                    if g != 0 {
                        t.apply_single(site, &cliffords[g as usize].tableau);
                    }
                }
            }
            Layer::Entangling(pairs) => {
                for &(a, b) in pairs {
                    t.apply_pair(a, b, &ms);
                }
            }
        }
    }
    t
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable per-item seed derived from a master seed and a path of indices.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    // the rotation keeps derive_seed(a, [b]) and derive_seed(b, [a]) apart
    path.iter()
        .fold(mix64(master), |acc, &p| mix64(acc.rotate_left(23) ^ mix64(p)))
}
