use std::collections::HashSet;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of fourth-moment commutant elements.
pub const COMMUTANT_SIZE: usize = 30;

/// One element `T` of the fourth-moment Clifford commutant.
///
/// `T` is a 4-dimensional subspace of pairs `(x, y)` with `x, y ∈ F_2^4`,
/// each packed as `x | y << 4` where bit `c` of `x` (or `y`) belongs to copy
/// `c`. The single-qubit operator is `r(T) = Σ_{(x,y)∈T} |x⟩⟨y|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantElement {
    /// All 16 elements, sorted.
    pub elements: Vec<u8>,
    /// `r(T)[x][y]`.
    pub r_matrix: [[u8; 16]; 16],
    /// `τ(b1,b2) = ⟨b1,b2,0,0| r(T) |0,0,b1,b2⟩`, ordered `(00, 10, 01, 11)`.
    pub tau: [bool; 4],
}

impl CommutantElement {
    fn from_elements(mut elements: Vec<u8>) -> Self {
        elements.sort_unstable();
        let mut r_matrix = [[0u8; 16]; 16];
        for &v in &elements {
            r_matrix[(v & 15) as usize][(v >> 4) as usize] = 1;
        }
        let set: HashSet<u8> = elements.iter().copied().collect();
        let tau = [(0u8, 0u8), (1, 0), (0, 1), (1, 1)].map(|(b1, b2)| {
            let x = b1 | b2 << 1;
            let y = b1 << 2 | b2 << 3;
            set.contains(&(x | y << 4))
        });
        Self {
            elements,
            r_matrix,
            tau,
        }
    }

    pub fn contains(&self, v: u8) -> bool {
        self.elements.binary_search(&v).is_ok()
    }

    pub fn is_identity(&self) -> bool {
        self.elements.iter().all(|&v| v & 15 == v >> 4)
    }

    /// `|T ∩ T'|`, which equals `tr(r(T)† r(T'))`.
    pub fn overlap(&self, other: &CommutantElement) -> usize {
        self.elements.iter().filter(|&&v| other.contains(v)).count()
    }

    /// Applies `r(T)^{⊗n}` to a vector on `4n` qubits whose bit `4q + c` is
    /// copy `c` of qubit `q`.
    pub fn apply_tensor_power(&self, n: usize, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != 1usize << (4 * n) {
            return Err(Error::DimensionMismatch {
                expected: 1 << (4 * n),
                got: v.len(),
            });
        }
        let mut cur = v.to_vec();
        for q in 0..n {
            let shift = 4 * q;
            let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
            for (idx, amp) in cur.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let y = (idx >> shift) & 15;
                let rest = idx & !(15 << shift);
                for x in 0..16 {
                    if self.r_matrix[x][y] == 1 {
                        next[rest | x << shift] += amp;
                    }
                }
            }
            cur = next;
        }
        Ok(cur)
    }
}

fn span(basis: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8];
    for &b in basis {
        let extra: Vec<u8> = out.iter().map(|&u| u ^ b).collect();
        out.extend(extra);
    }
    out
}

/// Every 4-dimensional subspace of `F_2^8`, as its list of elements, from the
/// reduced row echelon forms (there are 200787).
pub fn all_four_dim_subspaces() -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(200_787);
    for pivots in 0u16..256 {
        if pivots.count_ones() != 4 {
            continue;
        }
        let piv: Vec<u32> = (0..8).filter(|&b| pivots >> b & 1 == 1).collect();
        // row i has its leading one at piv[i]; free entries at higher,
        // non-pivot positions
        let free: Vec<Vec<u32>> = piv
            .iter()
            .map(|&p| (p + 1..8).filter(|&b| pivots >> b & 1 == 0).collect())
            .collect();
        let total: u32 = free.iter().map(|f| f.len() as u32).sum();
        for fill in 0u32..1 << total {
            let mut bit = 0;
            let rows: Vec<u8> = piv
                .iter()
                .zip(&free)
                .map(|(&p, fs)| {
                    let mut row = 1u8 << p;
                    for &f in fs {
                        if fill >> bit & 1 == 1 {
                            row |= 1 << f;
                        }
                        bit += 1;
                    }
                    row
                })
                .collect();
            out.push(span(&rows));
        }
    }
    out
}

fn weight_condition(elements: &[u8]) -> bool {
    elements
        .iter()
        .all(|&v| ((v & 15).count_ones() + 4 - (v >> 4).count_ones()) % 4 == 0)
}

/// `M r = r M` with `M_ab = (−1)^{a·b}`, i.e. `r` commutes with `H^{⊗4}`.
fn hadamard_condition(r: &[[u8; 16]; 16]) -> bool {
    let sign = |a: usize, b: usize| if (a & b).count_ones() % 2 == 0 { 1i32 } else { -1 };
    for a in 0..16 {
        for b in 0..16 {
            let mr: i32 = (0..16).map(|c| sign(a, c) * r[c][b] as i32).sum();
            let rm: i32 = (0..16).map(|c| r[a][c] as i32 * sign(c, b)).sum();
            if mr != rm {
                return false;
            }
        }
    }
    true
}

/// `r ⊗ r` commutes with `CNOT^{⊗4}` (control qubit 0, target qubit 1 in
/// every copy): the permutation `(u, w) ↦ (u, u ⊕ w)` on kets and bras must
/// map the support of `r ⊗ r` onto itself.
fn cnot_condition(elements: &[u8]) -> bool {
    let set: HashSet<u8> = elements.iter().copied().collect();
    elements
        .iter()
        .all(|&e1| elements.iter().all(|&e2| set.contains(&(e1 ^ e2))))
}

fn enumerate() -> Vec<CommutantElement> {
    let mut out: Vec<CommutantElement> = all_four_dim_subspaces()
        .into_iter()
        .filter(|els| weight_condition(els))
        .map(CommutantElement::from_elements)
        .filter(|t| hadamard_condition(&t.r_matrix) && cnot_condition(&t.elements))
        .collect();
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    out
}

/// The 30 commutant elements in lexicographic order of their sorted element
/// lists. Computed once.
pub fn enumerate_commutant_basis() -> Result<&'static [CommutantElement]> {
    static CACHE: OnceLock<Vec<CommutantElement>> = OnceLock::new();
    let basis = CACHE.get_or_init(enumerate);
    if basis.len() != COMMUTANT_SIZE {
        return Err(Error::CommutantCount(basis.len()));
    }
    Ok(basis)
}
