use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::commutant::{enumerate_commutant_basis, CommutantElement};
use crate::error::{Error, Result};

/// Condition numbers above this attach a warning to the solve.
pub const CONDITION_WARN: f64 = 1e10;

/// Relative singular-value cutoff of the minimum-norm solve.
const SVD_EPS: f64 = 1e-12;

/// Twirl coefficients `a_T` of `o(α)^{⊗n}`, with
/// `o(α) = Rz(α) ⊗ Rz(α) ⊗ Rz(α)† ⊗ Rz(α)†` acting on the four copies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwirlCoefficients {
    pub alpha: f64,
    pub n: usize,
    /// One complex coefficient per commutant element, in basis order.
    pub a: Vec<Complex64>,
    pub condition_number: f64,
    pub warning: Option<String>,
}

/// Diagonal of `o(α)` over the 16 copy patterns (bit `c` = copy `c`).
pub fn single_qubit_observable(alpha: f64) -> [Complex64; 16] {
    let signs = [1.0, 1.0, -1.0, -1.0];
    std::array::from_fn(|b| {
        let phase: f64 = (0..4)
            .map(|c| signs[c] * if b >> c & 1 == 1 { -1.0 } else { 1.0 })
            .sum();
        Complex64::from_polar(1.0, -alpha / 2.0 * phase)
    })
}

/// Solves `G a = v` with `G_{TT'} = |T ∩ T'|^n` and
/// `v_T = (Σ_{(x,x) ∈ T} o_x)^n`, both scaled by `16^{-n}`.
pub fn twirl_coefficients(alpha: f64, n: usize) -> Result<TwirlCoefficients> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "twirl coefficients need n >= 2 (got {n}); the single-qubit commutant operators are linearly dependent"
        )));
    }
    let basis = enumerate_commutant_basis()?;
    let m = basis.len();
    let o = single_qubit_observable(alpha);
    let gram = DMatrix::from_fn(m, m, |i, j| (basis[i].overlap(&basis[j]) as f64 / 16.0).powi(n as i32));
    let v: Vec<Complex64> = basis
        .iter()
        .map(|t| {
            let diag: Complex64 = (0u8..16)
                .filter(|&x| t.contains(x | x << 4))
                .map(|x| o[x as usize])
                .sum();
            (diag / 16.0).powi(n as i32)
        })
        .collect();
    let svd = gram.svd(true, true);
    let sv = &svd.singular_values;
    let condition_number = sv.max() / sv.min();
    let eps = SVD_EPS * sv.max();
    let re = svd
        .solve(&DVector::from_iterator(m, v.iter().map(|c| c.re)), eps)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let im = svd
        .solve(&DVector::from_iterator(m, v.iter().map(|c| c.im)), eps)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let warning = (condition_number > CONDITION_WARN || !condition_number.is_finite()).then(|| {
        let msg = format!(
            "Gram matrix condition number {condition_number:.3e} at n = {n}; minimum-norm coefficients returned"
        );
        log::warn!("{msg}");
        msg
    });
    Ok(TwirlCoefficients {
        alpha,
        n,
        a: re.iter().zip(im.iter()).map(|(&r, &i)| Complex64::new(r, i)).collect(),
        condition_number,
        warning,
    })
}

impl TwirlCoefficients {
    /// `Σ_T a_T R(T) |v⟩` on the `4n`-qubit copy register.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let basis = enumerate_commutant_basis()?;
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (t, a) in basis.iter().zip(&self.a) {
            for (o, r) in out.iter_mut().zip(t.apply_tensor_power(self.n, v)?) {
                *o += a * r;
            }
        }
        Ok(out)
    }
}

/// Membership of one element in the four classes read off its `τ` values.
fn classes(t: &CommutantElement) -> (bool, bool, bool, bool) {
    let [_, t10, t01, t11] = t.tau;
    (t10, t01, t11, t10 && t01 && t11)
}

/// Circuit-averaged collision probability of the last `n − k` qubits (the
/// full register when `k = 0`), by summing coefficient classes.
pub fn expected_collision_from(coeffs: &TwirlCoefficients, k: usize) -> Result<f64> {
    let n = coeffs.n;
    if k >= n && k != 0 {
        return Err(Error::InvalidArgument(format!("need k < n (k = {k}, n = {n})")));
    }
    let basis = enumerate_commutant_basis()?;
    let (mut all, mut x0, mut ox, mut xx, mut xy) = [Complex64::new(0.0, 0.0); 5].into();
    for (t, &a) in basis.iter().zip(&coeffs.a) {
        let (c10, c01, c11, call) = classes(t);
        all += a;
        if c10 {
            x0 += a;
        }
        if c01 {
            ox += a;
        }
        if c11 {
            xx += a;
        }
        if call {
            xy += a;
        }
    }
    let l = 2f64.powi(k as i32);
    let s = 2f64.powi((n - k) as i32);
    let total = all + (x0 + ox + xx) * (l - 1.0) + xy * ((l - 1.0) * (l - 2.0)) + (xx * l + xy * (l * (l - 1.0))) * (s - 1.0);
    check_real(total)
}

/// Same quantity from the per-qubit product form
/// `Σ_T a_T (1 + τ11)^{n−k} (1 + τ10 + τ01 + τ11)^k`.
pub fn expected_collision_product_form(coeffs: &TwirlCoefficients, k: usize) -> Result<f64> {
    let n = coeffs.n;
    let basis = enumerate_commutant_basis()?;
    let total: Complex64 = basis
        .iter()
        .zip(&coeffs.a)
        .map(|(t, a)| {
            let [_, t10, t01, t11] = t.tau.map(|b| b as i32 as f64);
            a * (1.0 + t11).powi((n - k) as i32) * (1.0 + t10 + t01 + t11).powi(k as i32)
        })
        .sum();
    check_real(total)
}

fn check_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-8 * z.re.abs().max(1e-300) {
        log::warn!("collision probability has imaginary part {:.3e}", z.im);
    }
    Ok(z.re)
}

/// `E_C M_{n−k}`: average collision probability of the syndrome register.
pub fn expected_collision_probability(alpha: f64, n: usize, k: usize) -> Result<f64> {
    expected_collision_from(&twirl_coefficients(alpha, n)?, k)
}

/// `−log2 E_C M_n + log2 E_C M_{n−k}` in bits.
pub fn analytic_renyi_conditional(alpha: f64, n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 0 < k < n (k = {k}, n = {n})")));
    }
    let coeffs = twirl_coefficients(alpha, n)?;
    let joint = expected_collision_from(&coeffs, 0)?;
    let marginal = expected_collision_from(&coeffs, k)?;
    Ok(-joint.log2() + marginal.log2())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticRenyiRow {
    pub alpha: f64,
    pub n: usize,
    pub k: usize,
    pub collision_joint: f64,
    pub collision_syndrome: f64,
    pub s2: f64,
}

pub fn analytic_renyi_row(alpha: f64, n: usize, k: usize) -> Result<AnalyticRenyiRow> {
    let coeffs = twirl_coefficients(alpha, n)?;
    let collision_joint = expected_collision_from(&coeffs, 0)?;
    let collision_syndrome = expected_collision_from(&coeffs, k)?;
    Ok(AnalyticRenyiRow {
        alpha,
        n,
        k,
        collision_joint,
        collision_syndrome,
        s2: -collision_joint.log2() + collision_syndrome.log2(),
    })
}

pub fn write_analytic_csv<W: Write>(w: W, rows: &[AnalyticRenyiRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}
