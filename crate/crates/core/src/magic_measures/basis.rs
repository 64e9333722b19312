use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::pauli_core::{CliffordTableau, PauliString};
use crate::statevector::{pauli_expectation_raw, StateVector};

use super::entropy::shannon_entropy;
use super::ssre::check_normalized;

/// Default largest logical register for exact basis minimization.
pub const BASIS_MIN_MAX_QUBITS: usize = 2;

/// Hard limit for [`stabilizer_bases`] (135 bases at three qubits).
const ENUM_MAX_QUBITS: usize = 3;

/// A stabilizer measurement basis, given by `k` independent commuting
/// Hermitian Pauli generators packed as `x | z << k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerBasis {
    pub k: usize,
    pub generators: Vec<u32>,
}

impl StabilizerBasis {
    pub fn generator_paulis(&self) -> Vec<PauliString> {
        self.generators
            .iter()
            .map(|&v| symplectic_to_pauli(self.k, v))
            .collect()
    }
}

fn symplectic_to_pauli(k: usize, v: u32) -> PauliString {
    let mask = (1u32 << k) - 1;
    let (x, z) = ((v & mask) as u64, (v >> k) as u64);
    PauliString::from_parts(k, vec![x], vec![z], (x & z).count_ones() as u8)
        .expect("single-word Pauli")
}

fn commute(k: usize, a: u32, b: u32) -> bool {
    let mask = (1u32 << k) - 1;
    let s = (a & mask) & (b >> k) ^ (a >> k) & (b & mask);
    s.count_ones() % 2 == 0
}

fn span(vs: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &v in vs {
        let extra: Vec<u32> = out.iter().map(|&u| u ^ v).collect();
        out.extend(extra);
    }
    out.sort_unstable();
    out
}

fn enumerate_bases(k: usize) -> Vec<StabilizerBasis> {
    let nonzero: Vec<u32> = (1..1u32 << (2 * k)).collect();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn rec(
        k: usize,
        start: usize,
        nonzero: &[u32],
        stack: &mut Vec<u32>,
        seen: &mut BTreeSet<Vec<u32>>,
        out: &mut Vec<StabilizerBasis>,
    ) {
        if stack.len() == k {
            let s = span(stack);
            if seen.insert(s) {
                out.push(StabilizerBasis {
                    k,
                    generators: stack.clone(),
                });
            }
            return;
        }
        let current = span(stack);
        for i in start..nonzero.len() {
            let v = nonzero[i];
            if current.binary_search(&v).is_ok() || !stack.iter().all(|&g| commute(k, g, v)) {
                continue;
            }
            stack.push(v);
            rec(k, i + 1, nonzero, stack, seen, out);
            stack.pop();
        }
    }
    rec(k, 0, &nonzero, &mut stack, &mut seen, &mut out);
    out
}

/// Every stabilizer measurement basis on `k` qubits, up to outcome relabeling
/// (3 for one qubit, 15 for two, 135 for three). Cached.
pub fn stabilizer_bases(k: usize) -> Result<&'static [StabilizerBasis]> {
    static CACHE: [OnceLock<Vec<StabilizerBasis>>; ENUM_MAX_QUBITS + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if k > ENUM_MAX_QUBITS {
        return Err(Error::UnsupportedSize {
            k,
            max: ENUM_MAX_QUBITS,
        });
    }
    Ok(CACHE[k].get_or_init(|| enumerate_bases(k)))
}

/// Outcome distribution when measuring the commuting generators `gens`.
///
/// `p(x) = 2^{-k} Σ_S (-1)^{x·S} ⟨g_S⟩` with `g_S` the product over `S`.
pub fn generator_distribution(state: &StateVector, gens: &[PauliString]) -> Result<Vec<f64>> {
    let k = gens.len();
    let amps = state.amplitudes();
    let mut products: Vec<PauliString> = Vec::with_capacity(1 << k);
    products.push(PauliString::identity(state.num_qubits()));
    let mut e = vec![0.0f64; 1 << k];
    e[0] = 1.0;
    for s in 1usize..1 << k {
        let low = s.trailing_zeros() as usize;
        let g = &gens[low];
        if g.num_qubits() != state.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: state.num_qubits(),
                got: g.num_qubits(),
            });
        }
        let p = products[s & (s - 1)].mul(g)?;
        e[s] = pauli_expectation_raw(amps, p.x_words()[0] as usize, p.z_words()[0] as usize, p.phase()).re;
        products.push(p);
    }
    let mut h = 1;
    while h < e.len() {
        for base in (0..e.len()).step_by(2 * h) {
            for i in base..base + h {
                let (a, b) = (e[i], e[i + h]);
                e[i] = a + b;
                e[i + h] = a - b;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / (1u64 << k) as f64;
    Ok(e.into_iter().map(|v| (v * scale).max(0.0)).collect())
}

/// Shannon entropy (bits) of `|⟨x|C†|ψ⟩|²` where `basis` is the tableau of `C`.
pub fn measurement_entropy(state: &StateVector, basis: &CliffordTableau) -> Result<f64> {
    let n = state.num_qubits();
    if basis.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: basis.num_qubits(),
        });
    }
    check_normalized(state)?;
    let inv = basis.inverse();
    let gens = (0..n)
        .map(|j| inv.conjugate(&PauliString::z_on(n, j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(shannon_entropy(&generator_distribution(state, &gens)?))
}

/// Minimum measurement entropy over all stabilizer bases, for states of at
/// most `k_max` qubits.
pub fn basis_minimized_entropy_with_cap(state: &StateVector, k_max: usize) -> Result<f64> {
    let k = state.num_qubits();
    if k > k_max.min(ENUM_MAX_QUBITS) {
        return Err(Error::UnsupportedSize {
            k,
            max: k_max.min(ENUM_MAX_QUBITS),
        });
    }
    check_normalized(state)?;
    let mut best = f64::INFINITY;
    for b in stabilizer_bases(k)? {
        let h = shannon_entropy(&generator_distribution(state, &b.generator_paulis())?);
        best = best.min(h);
    }
    Ok(best)
}

pub fn basis_minimized_entropy(state: &StateVector) -> Result<f64> {
    basis_minimized_entropy_with_cap(state, BASIS_MIN_MAX_QUBITS)
}
