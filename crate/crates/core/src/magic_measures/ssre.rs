use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Largest state accepted by [`ssre`] (`4^k` Pauli expectations).
pub const SSRE_MAX_QUBITS: usize = 10;

pub(crate) const NORM_TOL: f64 = 1e-8;

pub(crate) fn check_normalized(state: &StateVector) -> Result<()> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

fn wht_in_place(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for base in (0..v.len()).step_by(2 * h) {
            for i in base..base + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `Σ_P ⟨ψ|P|ψ⟩^4` over all `4^k` Hermitian Pauli strings.
///
/// For each X-pattern `x`, the expectations of `X^x Z^z` over every `z` are
/// the Walsh-Hadamard transform of `conj(ψ(y⊕x)) ψ(y)`.
pub fn pauli_fourth_moment(state: &StateVector) -> Result<f64> {
    let k = state.num_qubits();
    if k > SSRE_MAX_QUBITS {
        return Err(Error::ResourceLimit {
            what: "stabilizer Rényi entropy",
            requested: k,
            cap: SSRE_MAX_QUBITS,
        });
    }
    check_normalized(state)?;
    let psi = state.amplitudes();
    let dim = psi.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    let mut total = 0.0;
    for x in 0..dim {
        for (y, b) in buf.iter_mut().enumerate() {
            *b = psi[y ^ x].conj() * psi[y];
        }
        wht_in_place(&mut buf);
        total += buf.iter().map(|e| e.norm_sqr().powi(2)).sum::<f64>();
    }
    Ok(total)
}

/// Stabilizer 2-Rényi entropy `M2` in bits.
pub fn ssre(state: &StateVector) -> Result<f64> {
    let dim = (1usize << state.num_qubits()) as f64;
    Ok(-(pauli_fourth_moment(state)? / dim).log2())
}
