use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_complex::Complex64;

use super::pauli::{Pauli, PauliString};
use crate::error::{Error, Result};

/// A Clifford unitary `C` stored as the Heisenberg images `C† g C` of the
/// generators `g ∈ {X_0..X_{n-1}, Z_0..Z_{n-1}}`.
///
/// Row `j` holds the image of `X_j`, row `n + j` the image of `Z_j`. The
/// symplectic matrix is the bit content of those rows and the phase vector
/// their phase exponents; global phase of `C` is not represented.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CliffordTableau {
    n: usize,
    images: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        let images = (0..n)
            .map(|j| PauliString::x_on(n, j))
            .chain((0..n).map(|j| PauliString::z_on(n, j)))
            .collect();
        Self { n, images }
    }

    /// Builds a tableau from the images of `X_0.., Z_0..`; checks the
    /// symplectic condition and Hermiticity.
    pub fn from_images(images: Vec<PauliString>) -> Result<Self> {
        if images.len() % 2 != 0 {
            return Err(Error::InvalidArgument("odd number of generator images".into()));
        }
        let n = images.len() / 2;
        if let Some(bad) = images.iter().find(|p| p.num_qubits() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.num_qubits(),
            });
        }
        let t = Self { n, images };
        if !t.is_symplectic() {
            return Err(Error::InvalidArgument(
                "generator images do not preserve the symplectic form".into(),
            ));
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, j: usize) -> &PauliString {
        &self.images[j]
    }

    pub fn z_image(&self, j: usize) -> &PauliString {
        &self.images[self.n + j]
    }

    pub fn images(&self) -> &[PauliString] {
        &self.images
    }

    /// `2n × 2n` bit matrix; row `r` is the image of generator `r` laid out
    /// as `[x_0..x_{n-1}, z_0..z_{n-1}]`.
    pub fn symplectic_matrix(&self) -> Vec<Vec<bool>> {
        self.images
            .iter()
            .map(|p| {
                (0..self.n)
                    .map(|j| p.x_bit(j))
                    .chain((0..self.n).map(|j| p.z_bit(j)))
                    .collect()
            })
            .collect()
    }

    /// Phase exponents (powers of `i`) of the generator images.
    pub fn phase_vector(&self) -> Vec<u8> {
        self.images.iter().map(|p| p.phase()).collect()
    }

    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        for (a, pa) in self.images.iter().enumerate() {
            if !pa.is_hermitian() || pa.is_identity() {
                return false;
            }
            for (b, pb) in self.images.iter().enumerate().skip(a + 1) {
                let should_anticommute = b == a + n;
                if pa.commutes_with(pb) == should_anticommute {
                    return false;
                }
            }
        }
        true
    }

    /// Returns `C† p C`, phase tracked exactly.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: p.num_qubits(),
            });
        }
        Ok(self.conjugate_unchecked(p))
    }

    fn conjugate_unchecked(&self, p: &PauliString) -> PauliString {
        let mut out = PauliString::identity(self.n);
        out.mul_phase(p.phase());
        for j in 0..self.n {
            if p.x_bit(j) {
                out.mul_assign_right(&self.images[j]);
            }
        }
        for j in 0..self.n {
            if p.z_bit(j) {
                out.mul_assign_right(&self.images[self.n + j]);
            }
        }
        out
    }

    /// Tableau of the circuit that applies `self` first and `next` second.
    pub fn then(&self, next: &CliffordTableau) -> Result<CliffordTableau> {
        if next.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: next.n,
            });
        }
        let images = next
            .images
            .iter()
            .map(|g| self.conjugate_unchecked(g))
            .collect();
        Ok(Self { n: self.n, images })
    }

    /// Tableau of `C⁻¹`.
    pub fn inverse(&self) -> CliffordTableau {
        let n = self.n;
        let w = super::pauli::words_for(n);
        // The preimage u of a generator g is fixed by symplectic duality:
        // <u, X_s> = <g, C†X_sC> and <u, Z_s> = <g, C†Z_sC>.
        let mut images = Vec::with_capacity(2 * n);
        for (target_is_z, j) in (0..n).map(|j| (false, j)).chain((0..n).map(|j| (true, j))) {
            let (mut x, mut z) = (vec![0u64; w], vec![0u64; w]);
            for s in 0..n {
                let (img_x, img_z) = (&self.images[s], &self.images[n + s]);
                let (hx, hz) = if target_is_z {
                    (img_z.x_bit(j), img_x.x_bit(j))
                } else {
                    (img_z.z_bit(j), img_x.z_bit(j))
                };
                x[s / 64] |= (hx as u64) << (s % 64);
                z[s / 64] |= (hz as u64) << (s % 64);
            }
            let mut pre = PauliString::from_parts(n, x, z, 0).expect("word count");
            let target = if target_is_z {
                PauliString::z_on(n, j)
            } else {
                PauliString::x_on(n, j)
            };
            let img = self.conjugate_unchecked(&pre);
            debug_assert_eq!(img.x_words(), target.x_words());
            debug_assert_eq!(img.z_words(), target.z_words());
            pre.mul_phase((4 + target.phase() - img.phase()) & 3);
            images.push(pre);
        }
        Self { n, images }
    }

    /// Appends a single-qubit Clifford `g` acting on `site` (`C ← g·C`).
    pub fn apply_single(&mut self, site: usize, g: &CliffordTableau) {
        assert_eq!(g.n, 1);
        let lift = |p: &PauliString| -> PauliString {
            let mut q = PauliString::identity(self.n);
            q.mul_phase(p.phase());
            if p.x_bit(0) {
                q.mul_assign_right(&self.images[site]);
            }
            if p.z_bit(0) {
                q.mul_assign_right(&self.images[self.n + site]);
            }
            q
        };
        let new_x = lift(&g.images[0]);
        let new_z = lift(&g.images[1]);
        self.images[site] = new_x;
        self.images[self.n + site] = new_z;
    }

    /// Appends a two-qubit Clifford `g` acting on `(a, b)` (`C ← g·C`).
    pub fn apply_pair(&mut self, a: usize, b: usize, g: &CliffordTableau) {
        assert_eq!(g.n, 2);
        assert_ne!(a, b);
        let sites = [a, b];
        let lift = |p: &PauliString| -> PauliString {
            let mut q = PauliString::identity(self.n);
            q.mul_phase(p.phase());
            for (l, &s) in sites.iter().enumerate() {
                if p.x_bit(l) {
                    q.mul_assign_right(&self.images[s]);
                }
            }
            for (l, &s) in sites.iter().enumerate() {
                if p.z_bit(l) {
                    q.mul_assign_right(&self.images[self.n + s]);
                }
            }
            q
        };
        let nx: Vec<_> = (0..2).map(|l| lift(&g.images[l])).collect();
        let nz: Vec<_> = (0..2).map(|l| lift(&g.images[2 + l])).collect();
        for (l, &s) in sites.iter().enumerate() {
            self.images[s] = nx[l].clone();
            self.images[self.n + s] = nz[l].clone();
        }
    }

    pub fn hadamard() -> Self {
        Self {
            n: 1,
            images: vec![PauliString::z_on(1, 0), PauliString::x_on(1, 0)],
        }
    }

    /// `S = diag(1, i)`: `S† X S = -Y`.
    pub fn phase_s() -> Self {
        Self {
            n: 1,
            images: vec![
                PauliString::single(1, 0, Pauli::Y).negated(),
                PauliString::z_on(1, 0),
            ],
        }
    }

    /// `MS(π/2) = exp(iπ X⊗X / 4)`; generators anticommuting with `XX` map to
    /// `i·g·XX`.
    pub fn molmer_sorensen() -> Self {
        let mut xx = PauliString::x_on(2, 0);
        xx.mul_assign_right(&PauliString::x_on(2, 1));
        let images = [
            PauliString::x_on(2, 0),
            PauliString::x_on(2, 1),
            PauliString::z_on(2, 0),
            PauliString::z_on(2, 1),
        ]
        .into_iter()
        .map(|g| {
            if g.commutes_with(&xx) {
                g
            } else {
                let mut out = g;
                out.mul_assign_right(&xx);
                out.mul_phase(1);
                out
            }
        })
        .collect();
        Self { n: 2, images }
    }

    /// CNOT with control 0 and target 1.
    pub fn cnot() -> Self {
        let mut xx = PauliString::x_on(2, 0);
        xx.mul_assign_right(&PauliString::x_on(2, 1));
        let mut zz = PauliString::z_on(2, 0);
        zz.mul_assign_right(&PauliString::z_on(2, 1));
        Self {
            n: 2,
            images: vec![xx, PauliString::x_on(2, 1), PauliString::z_on(2, 0), zz],
        }
    }

    /// Embeds the tableau of an `m`-qubit gate acting on `sites` of `n` qubits.
    pub fn embed(&self, n: usize, sites: &[usize]) -> Result<CliffordTableau> {
        if sites.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: sites.len(),
            });
        }
        let mut t = CliffordTableau::identity(n);
        match self.n {
            1 => t.apply_single(sites[0], self),
            2 => t.apply_pair(sites[0], sites[1], self),
            _ => {
                return Err(Error::InvalidArgument(
                    "embedding supports one- and two-qubit gates".into(),
                ))
            }
        }
        Ok(t)
    }

    /// Ordering key for single-qubit tableaux: symplectic bits relative to the
    /// identity, then the coefficients of the images. The identity sorts first.
    fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(6 * self.n * self.n);
        for (r, row) in self.symplectic_matrix().into_iter().enumerate() {
            for (c, bit) in row.into_iter().enumerate() {
                key.push((bit ^ (r == c)) as u8);
            }
        }
        key.extend(self.images.iter().map(|p| p.coefficient()));
        key
    }
}

type Mat2 = [[Complex64; 2]; 2];

/// One element of the single-qubit Clifford group: tableau plus a unitary
/// representative (global phase arbitrary).
#[derive(Clone, Debug)]
pub struct SingleQubitClifford {
    pub tableau: CliffordTableau,
    pub matrix: Mat2,
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub(crate) fn hadamard_matrix() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub(crate) fn s_matrix() -> Mat2 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[o, z], [z, Complex64::new(0.0, 1.0)]]
}

/// The 24 single-qubit Cliffords in canonical order (identity first).
///
/// Built by closing `{H, S}` under composition, deduplicating by tableau and
/// sorting by [`CliffordTableau`]'s canonical key.
pub fn single_qubit_cliffords() -> &'static [SingleQubitClifford] {
    static CACHE: OnceLock<Vec<SingleQubitClifford>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let gens = [
            (CliffordTableau::hadamard(), hadamard_matrix()),
            (CliffordTableau::phase_s(), s_matrix()),
        ];
        let id = CliffordTableau::identity(1);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut seen: HashMap<CliffordTableau, Mat2> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone(), [[one, zero], [zero, one]]);
        queue.push_back(id);
        while let Some(t) = queue.pop_front() {
            let m = seen[&t];
            for (gt, gm) in &gens {
                let nt = t.then(gt).expect("single-qubit tableaux");
                if !seen.contains_key(&nt) {
                    seen.insert(nt.clone(), mat2_mul(gm, &m));
                    queue.push_back(nt);
                }
            }
        }
        let mut all: Vec<_> = seen
            .into_iter()
            .map(|(tableau, matrix)| SingleQubitClifford { tableau, matrix })
            .collect();
        all.sort_by_key(|c| c.tableau.canonical_key());
        all
    })
}

/// Public form of the enumeration: the 24 tableaux in canonical order.
pub fn enumerate_single_qubit_cliffords() -> Vec<CliffordTableau> {
    single_qubit_cliffords()
        .iter()
        .map(|c| c.tableau.clone())
        .collect()
}
