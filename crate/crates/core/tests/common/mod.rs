#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use coherent_magic::statevector::StateVector;
use num_complex::Complex64;
use rand::Rng;

pub const I0: Complex64 = Complex64::new(0.0, 0.0);
pub const I1: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square matrix, row-major.
#[derive(Clone, Debug)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Dense {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![I0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = I1;
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let d = self.dim;
        let mut data = vec![I0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == I0 {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * o.data[k * d + j];
                }
            }
        }
        Dense { dim: d, data }
    }

    pub fn adjoint(&self) -> Dense {
        let d = self.dim;
        Dense {
            dim: d,
            data: (0..d * d).map(|idx| self.data[(idx % d) * d + idx / d].conj()).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.data[i * self.dim + j] * v[j]).sum())
            .collect()
    }

    /// Key that identifies the matrix up to a global phase.
    pub fn phase_key(&self) -> Vec<(i64, i64)> {
        let pivot = self.data.iter().find(|z| z.norm() > 1e-9).unwrap();
        let ph = pivot / pivot.norm();
        self.data
            .iter()
            .map(|z| {
                let w = z / ph;
                ((w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64)
            })
            .collect()
    }
}

pub fn h() -> Dense {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Dense::from_rows(&[&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)], &[Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]])
}

pub fn s_gate() -> Dense {
    Dense::from_rows(&[&[I1, I0], &[I0, Complex64::new(0.0, 1.0)]])
}

/// `gate` (on `sites.len()` qubits, `sites[0]` the low bit) embedded in `n` qubits.
pub fn embed(gate: &Dense, n: usize, sites: &[usize]) -> Dense {
    let dim = 1usize << n;
    let mut out = Dense {
        dim,
        data: vec![I0; dim * dim],
    };
    let mask: usize = sites.iter().map(|&s| 1 << s).sum();
    let local = |x: usize| -> usize { sites.iter().enumerate().map(|(i, &s)| (x >> s & 1) << i).sum() };
    let spread = |l: usize| -> usize { sites.iter().enumerate().map(|(i, &s)| (l >> i & 1) << s).sum() };
    for col in 0..dim {
        let lc = local(col);
        let rest = col & !mask;
        for lr in 0..gate.dim {
            let g = gate.at(lr, lc);
            if g != I0 {
                out.data[(rest | spread(lr)) * dim + col] = g;
            }
        }
    }
    out
}

/// CNOT with control `c`, target `t`, on `n` qubits.
pub fn cnot(n: usize, c: usize, t: usize) -> Dense {
    let dim = 1usize << n;
    let mut out = Dense {
        dim,
        data: vec![I0; dim * dim],
    };
    for x in 0..dim {
        let y = if x >> c & 1 == 1 { x ^ (1 << t) } else { x };
        out.data[y * dim + x] = I1;
    }
    out
}

/// All 11,520 two-qubit Cliffords modulo phase, by breadth-first closure.
pub fn two_qubit_clifford_group() -> Vec<Dense> {
    let gens = [
        embed(&h(), 2, &[0]),
        embed(&h(), 2, &[1]),
        embed(&s_gate(), 2, &[0]),
        embed(&s_gate(), 2, &[1]),
        cnot(2, 0, 1),
    ];
    let id = Dense::identity(4);
    let mut seen = HashSet::new();
    seen.insert(id.phase_key());
    let mut queue = VecDeque::from([id.clone()]);
    let mut out = vec![id];
    while let Some(g) = queue.pop_front() {
        for gen in &gens {
            let m = gen.mul(&g);
            if seen.insert(m.phase_key()) {
                out.push(m.clone());
                queue.push_back(m);
            }
        }
    }
    out
}

/// Product of `len` random H, S, CNOT gates on `n` qubits, built by row
/// operations.
pub fn random_clifford<R: Rng>(n: usize, len: usize, rng: &mut R) -> Dense {
    let dim = 1usize << n;
    let mut u = Dense::identity(dim);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..len {
        match rng.gen_range(0..if n > 1 { 3 } else { 2 }) {
            0 => {
                let q = rng.gen_range(0..n);
                for row in (0..dim).filter(|row| row >> q & 1 == 0) {
                    let other = row | 1 << q;
                    for col in 0..dim {
                        let (a, b) = (u.data[row * dim + col], u.data[other * dim + col]);
                        u.data[row * dim + col] = (a + b) * r;
                        u.data[other * dim + col] = (a - b) * r;
                    }
                }
            }
            1 => {
                let q = rng.gen_range(0..n);
                for row in (0..dim).filter(|row| row >> q & 1 == 1) {
                    for col in 0..dim {
                        u.data[row * dim + col] *= Complex64::new(0.0, 1.0);
                    }
                }
            }
            _ => {
                let c = rng.gen_range(0..n);
                let mut t = rng.gen_range(0..n - 1);
                if t >= c {
                    t += 1;
                }
                for row in (0..dim).filter(|row| row >> c & 1 == 1 && row >> t & 1 == 0) {
                    let other = row | 1 << t;
                    for col in 0..dim {
                        u.data.swap(row * dim + col, other * dim + col);
                    }
                }
            }
        }
    }
    u
}

/// Applies `u` (on `n` qubits) to copy `copy` of a `4n`-qubit register whose
/// bit `4q + c` is copy `c` of qubit `q`.
pub fn apply_on_copy(u: &Dense, n: usize, copy: usize, v: &[Complex64]) -> Vec<Complex64> {
    let sites: Vec<usize> = (0..n).map(|q| 4 * q + copy).collect();
    let mask: usize = sites.iter().map(|&s| 1 << s).sum();
    let local = |x: usize| -> usize { sites.iter().enumerate().map(|(i, &s)| (x >> s & 1) << i).sum() };
    let spread = |l: usize| -> usize { sites.iter().enumerate().map(|(i, &s)| (l >> i & 1) << s).sum() };
    let mut out = vec![I0; v.len()];
    for (x, &amp) in v.iter().enumerate() {
        if amp == I0 {
            continue;
        }
        let lc = local(x);
        let rest = x & !mask;
        for lr in 0..u.dim {
            let g = u.at(lr, lc);
            if g != I0 {
                out[rest | spread(lr)] += g * amp;
            }
        }
    }
    out
}

pub fn apply_on_all_copies(u: &Dense, n: usize, v: &[Complex64]) -> Vec<Complex64> {
    (0..4).fold(v.to_vec(), |acc, c| apply_on_copy(u, n, c, &acc))
}

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.normalize().unwrap();
    s
}

pub fn state_from(u: &Dense, psi: &StateVector) -> StateVector {
    let mut s = StateVector::from_amplitudes(u.apply(psi.amplitudes())).unwrap();
    s.normalize().unwrap();
    s
}

pub fn random_stabilizer_state<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let u = random_clifford(n, 20 * n + 10, rng);
    state_from(&u, &StateVector::zero(n).unwrap())
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
