use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli_core::{syndrome_map, CliffordTableau, Pauli};
use crate::statevector::DEFAULT_MAX_QUBITS;

/// Effective action of the two-error logical operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    Unitary,
    Projector,
}

/// The two Z-error patterns behind one syndrome of a `K = 1` code.
///
/// With `C†Z_jC` multiplied over the set bits of `a`, the result acting on
/// `|0^N⟩` is `i^{ζ_a} σ_a|0⟩ ⊗ |s⟩` where `σ_a` is the Hermitian Pauli left
/// on the logical site 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromePairClassification {
    pub n: usize,
    /// Outcome on sites `1..n`, site 1 in bit 0.
    pub syndrome: u64,
    pub a: u64,
    pub b: u64,
    pub n_a: u32,
    pub n_b: u32,
    pub sigma_a: Pauli,
    pub sigma_b: Pauli,
    pub zeta_a: u8,
    pub zeta_b: u8,
    pub anticommute: bool,
    /// `ζ_b − ζ_a − (n_b − n_a) mod 4`, so that the second amplitude is
    /// `i^m tan(α/2)^{n_b − n_a}` times the first (for `Rz(α) = e^{-iαZ/2}`).
    pub m: u8,
    pub kind: ActionKind,
}

impl SyndromePairClassification {
    pub fn delta(&self) -> i32 {
        self.n_b as i32 - self.n_a as i32
    }

    /// True when the two errors send `|0⟩` to different logical basis states.
    pub fn flips_logical(&self) -> bool {
        let xa = matches!(self.sigma_a, Pauli::X | Pauli::Y);
        let xb = matches!(self.sigma_b, Pauli::X | Pauli::Y);
        xa != xb
    }
}

/// Products of the conjugated Z errors, in raw `i^φ X^x Z^z` form.
#[derive(Clone, Debug)]
pub(crate) struct ErrorImages {
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Vec<u8>,
}

impl ErrorImages {
    pub fn new(encoder: &CliffordTableau) -> Result<Self> {
        let n = encoder.num_qubits();
        if n > DEFAULT_MAX_QUBITS {
            return Err(Error::ResourceLimit {
                what: "syndrome classification",
                requested: n,
                cap: DEFAULT_MAX_QUBITS,
            });
        }
        let imgs: Vec<_> = (0..n).map(|j| encoder.z_image(j)).collect();
        Ok(Self {
            x: imgs.iter().map(|p| p.x_words()[0]).collect(),
            z: imgs.iter().map(|p| p.z_words()[0]).collect(),
            phase: imgs.iter().map(|p| p.phase()).collect(),
        })
    }

    /// `(x, z, φ)` of `Π_{j∈a} C†Z_jC`. The factors commute, so order is free.
    pub fn product(&self, a: u64) -> (u64, u64, u8) {
        let (mut x, mut z, mut p) = (0u64, 0u64, 0u32);
        let mut rest = a;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            p += self.phase[j] as u32 + 2 * (z & self.x[j]).count_ones();
            x ^= self.x[j];
            z ^= self.z[j];
        }
        (x, z, (p & 3) as u8)
    }
}

fn logical_pauli(x0: bool, z0: bool) -> Pauli {
    match (x0, z0) {
        (false, false) => Pauli::I,
        (true, false) => Pauli::X,
        (true, true) => Pauli::Y,
        (false, true) => Pauli::Z,
    }
}

/// Classifies every realizable syndrome of the `K = 1` code defined by
/// measuring sites `1..N` after `encoder`.
pub fn classify_syndromes(encoder: &CliffordTableau) -> Result<Vec<SyndromePairClassification>> {
    let n = encoder.num_qubits();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two qubits".into()));
    }
    let map = syndrome_map(encoder, &(1..n).collect::<Vec<_>>())?;
    let kernel = map.matrix.kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::NonGenericCode {
            kernel_dim: kernel.len(),
            expected: 1,
        });
    }
    let kappa = kernel[0][0];
    let free = kappa.trailing_zeros();
    let images = ErrorImages::new(encoder)?;
    let mut out = Vec::with_capacity(1 << (n - 1));
    // one representative per coset of the kernel: bit `free` cleared
    for low in 0u64..1 << (n - 1) {
        let a = (low >> free << (free + 1)) | (low & ((1 << free) - 1));
        let b = a ^ kappa;
        let (xa, za, pa) = images.product(a);
        let (xb, zb, pb) = images.product(b);
        debug_assert_eq!(xa >> 1, xb >> 1);
        let (sa, sb) = (logical_pauli(xa & 1 == 1, za & 1 == 1), logical_pauli(xb & 1 == 1, zb & 1 == 1));
        let zeta_a = (pa + 4 - ((xa & za & 1) as u8)) & 3;
        let zeta_b = (pb + 4 - ((xb & zb & 1) as u8)) & 3;
        let (n_a, n_b) = (a.count_ones(), b.count_ones());
        let delta = (n_b as i64 - n_a as i64).rem_euclid(4) as u8;
        let m = (zeta_b + 8 - zeta_a - delta) & 3;
        let anticommute = !sa.commutes_with(sb);
        let unitary = (m % 2 == 1) != anticommute;
        out.push(SyndromePairClassification {
            n,
            syndrome: xa >> 1,
            a,
            b,
            n_a,
            n_b,
            sigma_a: sa,
            sigma_b: sb,
            zeta_a,
            zeta_b,
            anticommute,
            m,
            kind: if unitary {
                ActionKind::Unitary
            } else {
                ActionKind::Projector
            },
        });
    }
    out.sort_by_key(|c| c.syndrome);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli_core::{circuit_to_tableau, sample_encoder};

    fn generic_encoder(n: usize, start: u64) -> CliffordTableau {
        (start..)
            .map(|seed| circuit_to_tableau(&sample_encoder(n, n, seed).unwrap()))
            .find(|t| classify_syndromes(t).is_ok())
            .unwrap()
    }

    #[test]
    fn every_syndrome_appears_once_with_distinct_errors() {
        let t = generic_encoder(8, 0);
        let cls = classify_syndromes(&t).unwrap();
        assert_eq!(cls.len(), 128);
        for (i, c) in cls.iter().enumerate() {
            assert_eq!(c.syndrome, i as u64);
            assert_ne!(c.a, c.b);
        }
    }

    #[test]
    fn kind_rule() {
        let t = generic_encoder(8, 3);
        for c in classify_syndromes(&t).unwrap() {
            let unitary = (c.m % 2 == 1 && !c.anticommute) || (c.m % 2 == 0 && c.anticommute);
            assert_eq!(unitary, c.kind == ActionKind::Unitary);
        }
    }

    #[test]
    fn identity_encoder_is_not_generic() {
        assert!(matches!(
            classify_syndromes(&CliffordTableau::identity(4)),
            Err(Error::NonGenericCode { kernel_dim: 4, .. })
        ));
    }
}
