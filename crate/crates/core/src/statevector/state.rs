use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli_core::{single_qubit_cliffords, CircuitSpec, CliffordTableau, Layer, PauliString};

/// Largest register a dense state may hold unless a caller passes its own cap.
pub const DEFAULT_MAX_QUBITS: usize = 26;

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Multiplies by `i^k`.
#[inline]
pub(crate) fn times_i_pow(c: Complex64, k: u8) -> Complex64 {
    match k & 3 {
        0 => c,
        1 => Complex64::new(-c.im, c.re),
        2 => -c,
        _ => Complex64::new(c.im, -c.re),
    }
}

/// Dense pure state on `n` qubits; amplitude `k` belongs to the basis state
/// whose bit `j` is the value of qubit `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0^n⟩`, refusing registers above [`DEFAULT_MAX_QUBITS`].
    pub fn zero(n: usize) -> Result<Self> {
        Self::zero_with_cap(n, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_cap(n: usize, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::ResourceLimit {
                what: "dense state vector",
                requested: n,
                cap,
            });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros() as usize;
        Ok(Self { n, amps })
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        s.amps.iter_mut().for_each(|x| *x = a);
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        self.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `self ⊗ other` with `self` on the low qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            n: self.n + other.n,
            amps,
        }
    }

    pub fn apply_single(&mut self, site: usize, m: &Mat2) {
        assert!(site < self.n);
        let stride = 1usize << site;
        for base in (0..self.amps.len()).step_by(2 * stride) {
            for i in base..base + stride {
                let (a0, a1) = (self.amps[i], self.amps[i + stride]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Two-qubit gate; in `m`, qubit `a` is the low bit of the 4×4 index.
    pub fn apply_pair(&mut self, a: usize, b: usize, m: &Mat4) {
        assert!(a < self.n && b < self.n && a != b);
        let (ma, mb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ma != 0 || i & mb != 0 {
                continue;
            }
            let idx = [i, i | ma, i | mb, i | ma | mb];
            let v = idx.map(|k| self.amps[k]);
            for (r, &k) in idx.iter().enumerate() {
                self.amps[k] = (0..4).map(|c| m[r][c] * v[c]).sum();
            }
        }
    }

    /// `⊗_j Rz(α)` with `Rz(α) = exp(-iαZ/2)`, as one diagonal pass.
    pub fn apply_rz_layer(&mut self, alpha: f64) {
        let n = self.n as i64;
        let phases: Vec<Complex64> = (0..=self.n)
            .map(|w| Complex64::from_polar(1.0, -alpha / 2.0 * (n - 2 * w as i64) as f64))
            .collect();
        for (k, a) in self.amps.iter_mut().enumerate() {
            *a *= phases[k.count_ones() as usize];
        }
    }

    /// `P|ψ⟩` for a Pauli string (phase included).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: p.num_qubits(),
            });
        }
        let x = p.x_words()[0] as usize;
        let z = p.z_words()[0] as usize;
        let old = self.amps.clone();
        for (k, a) in old.into_iter().enumerate() {
            let sign = if (z & k).count_ones() % 2 == 1 { -a } else { a };
            self.amps[k ^ x] = times_i_pow(sign, p.phase());
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, p: &PauliString) -> Result<Complex64> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: p.num_qubits(),
            });
        }
        Ok(pauli_expectation_raw(
            &self.amps,
            p.x_words()[0] as usize,
            p.z_words()[0] as usize,
            p.phase(),
        ))
    }

    /// Applies the encoder gate by gate.
    pub fn apply_circuit(&mut self, spec: &CircuitSpec) -> Result<()> {
        self.check_spec(spec)?;
        let cliffords = single_qubit_cliffords();
        let ms = ms_matrix();
        for layer in &spec.layers {
            match layer {
                Layer::Single(idx) => {
                    for (site, &g) in idx.iter().enumerate() {
                        if g != 0 {
                            self.apply_single(site, &cliffords[g as usize].matrix);
                        }
                    }
                }
                Layer::Entangling(pairs) => {
                    for &(a, b) in pairs {
                        self.apply_pair(a, b, &ms);
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies the inverse of the encoder.
    pub fn apply_circuit_inverse(&mut self, spec: &CircuitSpec) -> Result<()> {
        self.check_spec(spec)?;
        let cliffords = single_qubit_cliffords();
        let ms_dag = adjoint4(&ms_matrix());
        for layer in spec.layers.iter().rev() {
            match layer {
                Layer::Single(idx) => {
                    for (site, &g) in idx.iter().enumerate() {
                        if g != 0 {
                            self.apply_single(site, &adjoint2(&cliffords[g as usize].matrix));
                        }
                    }
                }
                Layer::Entangling(pairs) => {
                    for &(a, b) in pairs.iter().rev() {
                        self.apply_pair(a, b, &ms_dag);
                    }
                }
            }
        }
        Ok(())
    }

    fn check_spec(&self, spec: &CircuitSpec) -> Result<()> {
        if spec.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: spec.n,
            });
        }
        spec.validate()
    }
}

pub(crate) fn pauli_expectation_raw(amps: &[Complex64], x: usize, z: usize, phase: u8) -> Complex64 {
    let mut acc = ZERO;
    for (k, a) in amps.iter().enumerate() {
        // (X^x Z^z ψ)[k] = (-1)^{z·(k⊕x)} ψ[k⊕x]
        let src = k ^ x;
        let t = amps[src];
        let t = if (z & src).count_ones() % 2 == 1 { -t } else { t };
        acc += a.conj() * t;
    }
    times_i_pow(acc, phase)
}

pub fn adjoint2(m: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

pub fn adjoint4(m: &Mat4) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

/// `MS(π/2) = (I + i X⊗X)/√2`.
pub fn ms_matrix() -> Mat4 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        m[i][i] = Complex64::new(h, 0.0);
        m[i ^ 3][i] = Complex64::new(0.0, h);
    }
    m
}

/// `C† · (⊗_j Rz(α)) · C |0^n⟩`, simulated gate by gate.
pub fn run_model_circuit(spec: &CircuitSpec, alpha: f64) -> Result<StateVector> {
    let mut s = StateVector::zero(spec.n)?;
    s.apply_circuit(spec)?;
    s.apply_rz_layer(alpha);
    s.apply_circuit_inverse(spec)?;
    Ok(s)
}

/// The same pipeline state evaluated from the error expansion
/// `C† Rz(α)^{⊗n} C = Π_j (cos(α/2) − i sin(α/2) C†Z_jC)`.
///
/// Every term `Π_{j∈a} C†Z_jC` maps `|0^n⟩` to a phased basis state, so the
/// state is a sum over the `2^n` error patterns, visited in Gray-code order.
/// Cost is `O(2^n)` per angle against `O(d·n·2^n)` for gate simulation.
#[derive(Clone, Debug)]
pub struct ErrorExpansion {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: Vec<u8>,
}

impl ErrorExpansion {
    pub fn new(encoder: &CliffordTableau) -> Result<Self> {
        let n = encoder.num_qubits();
        if n > DEFAULT_MAX_QUBITS {
            return Err(Error::ResourceLimit {
                what: "error expansion",
                requested: n,
                cap: DEFAULT_MAX_QUBITS,
            });
        }
        let imgs: Vec<_> = (0..n).map(|j| encoder.z_image(j)).collect();
        Ok(Self {
            n,
            x: imgs.iter().map(|p| p.x_words()[0]).collect(),
            z: imgs.iter().map(|p| p.z_words()[0]).collect(),
            phase: imgs.iter().map(|p| p.phase()).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn state(&self, alpha: f64) -> StateVector {
        let n = self.n;
        let (s, c) = (alpha / 2.0).sin_cos();
        // coefficient of a weight-w pattern: c^{n-w} (-i s)^w
        let coef: Vec<Complex64> = (0..=n)
            .map(|w| {
                let mag = c.powi((n - w) as i32) * s.powi(w as i32);
                times_i_pow(Complex64::new(mag, 0.0), ((4 - (w % 4)) % 4) as u8)
            })
            .collect();
        let mut amps = vec![ZERO; 1 << n];
        let (mut cx, mut cz, mut cp) = (0u64, 0u64, 0u8);
        let mut gray = 0u64;
        let mut weight = 0usize;
        amps[0] = coef[0];
        for step in 1u64..(1u64 << n) {
            let j = step.trailing_zeros() as usize;
            gray ^= 1 << j;
            if gray >> j & 1 == 1 {
                weight += 1;
            } else {
                weight -= 1;
            }
            let cross = (cz & self.x[j]).count_ones();
            cp = ((cp as u32 + self.phase[j] as u32 + 2 * cross) & 3) as u8;
            cx ^= self.x[j];
            cz ^= self.z[j];
            amps[cx as usize] += times_i_pow(coef[weight], cp);
        }
        StateVector { n, amps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli_core::{circuit_to_tableau, sample_encoder};

    fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn alpha_zero_returns_all_zero_state() {
        for seed in 0..5 {
            let spec = sample_encoder(6, 6, seed).unwrap();
            let s = run_model_circuit(&spec, 0.0).unwrap();
            assert!(close(&s, &StateVector::zero(6).unwrap(), 1e-12));
        }
    }

    #[test]
    fn identity_encoder_only_adds_global_phase() {
        let alpha = 0.83;
        let s = run_model_circuit(&CircuitSpec::identity(2), alpha).unwrap();
        let expected = Complex64::from_polar(1.0, -alpha);
        assert!((s.amplitudes()[0] - expected).norm() < 1e-14);
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() < 1e-14));
    }

    #[test]
    fn norm_is_preserved() {
        let spec = sample_encoder(8, 8, 11).unwrap();
        let s = run_model_circuit(&spec, 0.9).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resource_cap_is_enforced() {
        assert!(matches!(
            StateVector::zero(27),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn expansion_matches_gate_simulation() {
        for seed in 0..6 {
            let spec = sample_encoder(8, 8, seed).unwrap();
            let exp = ErrorExpansion::new(&circuit_to_tableau(&spec)).unwrap();
            for alpha in [0.0, 0.3, 1.1, std::f64::consts::FRAC_PI_2] {
                let dense = run_model_circuit(&spec, alpha).unwrap();
                assert!(close(&dense, &exp.state(alpha), 1e-12), "seed {seed} α {alpha}");
            }
        }
    }

    #[test]
    fn clifford_point_gives_stabilizer_expectations() {
        let spec = sample_encoder(4, 4, 5).unwrap();
        let s = run_model_circuit(&spec, std::f64::consts::FRAC_PI_2).unwrap();
        for x in 0..16u64 {
            for z in 0..16u64 {
                let mut p = PauliString::from_parts(4, vec![x], vec![z], 0).unwrap();
                p.mul_phase((x & z).count_ones() as u8);
                let e = s.expectation(&p).unwrap();
                assert!(e.im.abs() < 1e-12);
                let r = e.re.abs();
                assert!(r < 1e-12 || (r - 1.0).abs() < 1e-12, "⟨P⟩ = {r}");
            }
        }
    }

    #[test]
    fn tableau_conjugation_matches_matrix_conjugation() {
        // C†PC|φ⟩ = C†(P(C|φ⟩)) for random |φ⟩ and all generators.
        let spec = sample_encoder(4, 6, 9).unwrap();
        let t = circuit_to_tableau(&spec);
        let mut phi = StateVector::zero(4).unwrap();
        phi.amps = (0..16)
            .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        phi.normalize().unwrap();
        for g in (0..4).map(|j| PauliString::x_on(4, j)).chain((0..4).map(|j| PauliString::z_on(4, j))) {
            let mut lhs = phi.clone();
            lhs.apply_pauli(&t.conjugate(&g).unwrap()).unwrap();
            let mut rhs = phi.clone();
            rhs.apply_circuit(&spec).unwrap();
            rhs.apply_pauli(&g).unwrap();
            rhs.apply_circuit_inverse(&spec).unwrap();
            assert!(close(&lhs, &rhs, 1e-12), "generator {g}");
        }
    }
}
