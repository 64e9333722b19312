use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A Pauli operator `i^phase · X^x · Z^z` on `n` qubits.
///
/// The X and Z parts are bit-packed, qubit `j` living in bit `j % 64` of word
/// `j / 64`. The product `X^x Z^z` is taken with every X factor to the left of
/// every Z factor, so a `Y` on one site is stored as `x = z = 1` with one
/// extra unit of phase (`Y = i·X·Z`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

/// Single-site Pauli label.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize, serde::Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// Hermitian single-site Pauli `p` on qubit `site`.
    pub fn single(n: usize, site: usize, p: Pauli) -> Self {
        let mut out = Self::identity(n);
        out.set_site(site, p);
        out
    }

    pub fn x_on(n: usize, site: usize) -> Self {
        Self::single(n, site, Pauli::X)
    }

    pub fn z_on(n: usize, site: usize) -> Self {
        Self::single(n, site, Pauli::Z)
    }

    /// Builds `i^phase X^x Z^z` from raw words (bits above `n` must be clear).
    pub fn from_parts(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Result<Self> {
        let w = words_for(n);
        if x.len() != w || z.len() != w {
            return Err(Error::InvalidArgument(format!(
                "expected {w} words for {n} qubits"
            )));
        }
        let mut p = Self {
            n,
            x,
            z,
            phase: phase & 3,
        };
        p.mask_tail();
        Ok(p)
    }

    fn mask_tail(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            let last = self.x.len() - 1;
            let mask = (1u64 << rem) - 1;
            self.x[last] &= mask;
            self.z[last] &= mask;
        }
        if self.n == 0 {
            self.x[0] = 0;
            self.z[0] = 0;
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Raw phase exponent of the `X^x Z^z` form.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, j: usize) -> bool {
        (self.x[j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn z_bit(&self, j: usize) -> bool {
        (self.z[j / 64] >> (j % 64)) & 1 == 1
    }

    pub fn site(&self, j: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(j), self.z_bit(j))
    }

    /// Overwrites site `j` with the Hermitian Pauli `p`, keeping the
    /// coefficient of the letter form unchanged.
    pub fn set_site(&mut self, j: usize, p: Pauli) {
        assert!(j < self.n, "site {j} out of range for {} qubits", self.n);
        let coeff = self.coefficient();
        let (xb, zb) = p.bits();
        let (w, b) = (j / 64, j % 64);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
        self.phase = (coeff + self.y_count()) & 3;
    }

    fn y_count(&self) -> u8 {
        (self
            .x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            & 3) as u8
    }

    /// Exponent `c` such that this operator equals `i^c` times its letter
    /// string (e.g. `-XYZ` has `c = 2`).
    pub fn coefficient(&self) -> u8 {
        (self.phase + 4 - self.y_count()) & 3
    }

    pub fn is_hermitian(&self) -> bool {
        self.coefficient() % 2 == 0
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n);
        let s: u32 = (0..self.x.len())
            .map(|w| ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones())
            .sum();
        s % 2 == 0
    }

    /// In-place right multiplication `self ← self · other`.
    pub fn mul_assign_right(&mut self, other: &PauliString) {
        debug_assert_eq!(self.n, other.n);
        let mut cross = 0u32;
        for w in 0..self.x.len() {
            cross += (self.z[w] & other.x[w]).count_ones();
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * cross) & 3) as u8;
    }

    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// Multiplies the operator by `i^k`.
    pub fn mul_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn negated(&self) -> PauliString {
        let mut out = self.clone();
        out.mul_phase(2);
        out
    }
}

impl fmt::Display for PauliString {
    /// Letter form with qubit 0 leftmost, e.g. `+XIZ`, `-iY`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.coefficient() as usize];
        f.write_str(prefix)?;
        for j in 0..self.n {
            let c = match self.site(j) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-][i]P0P1...` with qubit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut coeff = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            coeff = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            coeff += 1;
            rest = r;
        }
        let n = rest.chars().count();
        let mut p = PauliString::identity(n);
        for (j, c) in rest.chars().enumerate() {
            let label = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(format!("bad Pauli letter {other:?}"))),
            };
            p.set_site(j, label);
        }
        p.phase = (p.y_count() + coeff) & 3;
        Ok(p)
    }
}
