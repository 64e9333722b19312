use std::collections::BTreeMap;

use super::pauli::{words_for, PauliString};
use super::tableau::CliffordTableau;
use crate::error::{Error, Result};

/// Dense bit-packed matrix over GF(2); each row is a run of 64-bit words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        for w in 0..self.stride {
            let v = self.data[src * self.stride + w];
            self.data[dst * self.stride + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.stride {
                self.data.swap(a * self.stride + w, b * self.stride + w);
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// `A·v` for a bit-packed column vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; words_for(self.rows)];
        for r in 0..self.rows {
            let parity: u32 = self
                .row(r)
                .iter()
                .zip(v)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if parity % 2 == 1 {
                out[r / 64] |= 1 << (r % 64);
            }
        }
        out
    }

    /// Basis of the right kernel `{v : A·v = 0}`, each vector bit-packed.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.stride];
            v[free / 64] |= 1 << (free % 64);
            for (r, &p) in pivots.iter().enumerate() {
                if m.get(r, free) {
                    v[p / 64] |= 1 << (p % 64);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Linear map from Z-error patterns to syndromes, with the conjugated error
/// Paulis `C† Z_j C` kept for phase bookkeeping.
#[derive(Clone, Debug)]
pub struct SyndromeMap {
    /// Rows are measured sites (in the given order), columns error sites.
    pub matrix: Gf2Matrix,
    pub measured: Vec<usize>,
    /// `C† Z_j C` for every site `j`.
    pub error_images: Vec<PauliString>,
}

/// Column `j` of the returned matrix is the X part of `C† Z_j C` restricted
/// to `measured`.
pub fn syndrome_map(t: &CliffordTableau, measured: &[usize]) -> Result<SyndromeMap> {
    let n = t.num_qubits();
    if let Some(&bad) = measured.iter().find(|&&s| s >= n) {
        return Err(Error::InvalidArgument(format!(
            "measured site {bad} out of range for {n} qubits"
        )));
    }
    let error_images: Vec<_> = (0..n).map(|j| t.z_image(j).clone()).collect();
    let mut matrix = Gf2Matrix::zeros(measured.len(), n);
    for (j, img) in error_images.iter().enumerate() {
        for (r, &site) in measured.iter().enumerate() {
            if img.x_bit(site) {
                matrix.set(r, j, true);
            }
        }
    }
    Ok(SyndromeMap {
        matrix,
        measured: measured.to_vec(),
        error_images,
    })
}

/// How the `2^N` error patterns spread over syndromes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorsPerSyndrome {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    /// errors-per-syndrome → number of syndromes receiving that many.
    pub histogram: BTreeMap<u128, u128>,
}

impl ErrorsPerSyndrome {
    /// True when every one of the `2^{N-K}` syndromes receives `2^K` errors.
    pub fn is_uniform(&self) -> bool {
        self.rank + self.k == self.n
    }

    pub fn errors_per_syndrome(&self) -> u128 {
        1u128 << (self.n - self.rank)
    }
}

/// Errors-per-syndrome histogram from the rank of the syndrome map.
pub fn errors_per_syndrome(a: &Gf2Matrix, k: usize) -> ErrorsPerSyndrome {
    let n = a.cols();
    let rank = a.rank();
    let mut histogram = BTreeMap::new();
    histogram.insert(1u128 << (n - rank), 1u128 << rank);
    ErrorsPerSyndrome {
        n,
        k,
        rank,
        histogram,
    }
}
