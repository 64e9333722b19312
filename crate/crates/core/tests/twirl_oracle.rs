mod common;

use coherent_magic::schur_weyl::{
    enumerate_commutant_basis, expected_collision_from, single_qubit_observable, twirl_coefficients,
};
use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Diagonal of `o(α)^{⊗n}` on the `4n`-qubit copy register.
fn observable_diag(alpha: f64, n: usize) -> Vec<Complex64> {
    let o = single_qubit_observable(alpha);
    (0..1usize << (4 * n))
        .map(|i| (0..n).map(|q| o[i >> (4 * q) & 15]).product())
        .collect()
}

fn basis_vec(dim: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![I0; dim];
    v[i] = I1;
    v
}

#[test]
fn commutant_elements_commute_with_generators() {
    let basis = enumerate_commutant_basis().unwrap();
    assert_eq!(basis.len(), 30);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let group = two_qubit_clifford_group();
    let singles: Vec<Dense> = vec![h(), s_gate()];
    for t in basis {
        for c in &singles {
            for i in 0..16 {
                let v = basis_vec(16, i);
                let lhs = t.apply_tensor_power(1, &apply_on_all_copies(c, 1, &v)).unwrap();
                let rhs = apply_on_all_copies(c, 1, &t.apply_tensor_power(1, &v).unwrap());
                assert!(max_diff(&lhs, &rhs) < 1e-12);
            }
        }
        for _ in 0..20 {
            let c = &group[rng.gen_range(0..group.len())];
            let i = rng.gen_range(0..256);
            let v = basis_vec(256, i);
            let lhs = t.apply_tensor_power(2, &apply_on_all_copies(c, 2, &v)).unwrap();
            let rhs = apply_on_all_copies(c, 2, &t.apply_tensor_power(2, &v).unwrap());
            assert!(max_diff(&lhs, &rhs) < 1e-12);
        }
    }
}

#[test]
fn two_qubit_twirl_matches_group_average() {
    let group = two_qubit_clifford_group();
    assert_eq!(group.len(), 11520);
    let (n, alpha) = (2, 0.7);
    let diag = observable_diag(alpha, n);
    let coeffs = twirl_coefficients(alpha, n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut tests = vec![basis_vec(256, 0), basis_vec(256, 0b0011_1100), basis_vec(256, 0b1010_0101)];
    tests.push((0..256).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect());
    for v in &tests {
        let avg = group
            .par_iter()
            .map(|c| {
                let mut w = apply_on_all_copies(c, n, v);
                for (x, d) in w.iter_mut().zip(&diag) {
                    *x *= d;
                }
                apply_on_all_copies(&c.adjoint(), n, &w)
            })
            .reduce(
                || vec![I0; 256],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        let avg: Vec<Complex64> = avg.into_iter().map(|x| x / group.len() as f64).collect();
        let model = coeffs.apply(v).unwrap();
        assert!(max_diff(&avg, &model) < 1e-10, "diff {}", max_diff(&avg, &model));
    }
}

/// Copy-`c` bit string of every register index.
fn copy_table(n: usize) -> Vec<[usize; 4]> {
    (0..1usize << (4 * n))
        .map(|i| std::array::from_fn(|copy| (0..n).map(|q| (i >> (4 * q + copy) & 1) << q).sum()))
        .collect()
}

/// Element `⟨y| C†^{⊗4} O C^{⊗4} |x⟩` using the product structure of `C^{⊗4}|x⟩`.
fn twirled_element(c: &Dense, diag: &[Complex64], table: &[[usize; 4]], x: usize, y: usize) -> Complex64 {
    let m: [Vec<Complex64>; 4] = std::array::from_fn(|copy| {
        let (xc, yc) = (table[x][copy], table[y][copy]);
        (0..c.dim).map(|z| c.at(z, yc).conj() * c.at(z, xc)).collect()
    });
    diag.iter()
        .zip(table)
        .map(|(d, zc)| d * m[0][zc[0]] * m[1][zc[1]] * m[2][zc[2]] * m[3][zc[3]])
        .sum()
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn three_qubit_twirl_matches_sampled_circuits() {
    let (n, alpha, samples) = (3, 1.0, 100_000);
    let diag = observable_diag(alpha, n);
    let table = copy_table(n);
    let coeffs = twirl_coefficients(alpha, n).unwrap();
    // collision-type pair: ⟨X X 0 0| … |0 0 X X⟩ on each qubit pattern X = 0b101
    let pat = |a: [usize; 4]| -> usize {
        (0..n).map(|q| (0..4).map(|c| (a[c] >> q & 1) << (4 * q + c)).sum::<usize>()).sum()
    };
    let xs = [pat([0, 0, 5, 5]), 0b0001_0110_1001];
    let ys: Vec<usize> = xs
        .iter()
        .map(|&x| {
            if x == pat([0, 0, 5, 5]) {
                return pat([5, 5, 0, 0]);
            }
            // largest off-diagonal response of the model
            let w = coeffs.apply(&basis_vec(1 << (4 * n), x)).unwrap();
            (0..w.len()).filter(|&i| i != x).max_by(|&a, &b| w[a].norm().total_cmp(&w[b].norm())).unwrap()
        })
        .collect();
    let model: Vec<Complex64> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| coeffs.apply(&basis_vec(1 << (4 * n), x)).unwrap()[y])
        .collect();
    let rz = {
        let mut m = Dense::identity(8);
        for i in 0..8 {
            let z: f64 = (0..3).map(|q| if i >> q & 1 == 1 { -1.0 } else { 1.0 }).sum();
            m.data[i * 8 + i] = Complex64::from_polar(1.0, -alpha / 2.0 * z);
        }
        m
    };
    let rows: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            let c = random_clifford(n, 100, &mut rng);
            let u = c.adjoint().mul(&rz).mul(&c);
            let p: Vec<f64> = (0..8).map(|x| u.at(x, 0).norm_sqr()).collect();
            let joint: f64 = p.iter().map(|v| v * v).sum();
            let syn: f64 = (0..4).map(|s| (p[2 * s] + p[2 * s + 1]).powi(2)).sum();
            let mut row = vec![joint, syn];
            for (&x, &y) in xs.iter().zip(&ys) {
                let e = twirled_element(&c, &diag, &table, x, y);
                row.extend([e.re, e.im]);
            }
            row
        })
        .collect();
    let column = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<_>>();
    let checks = [
        (expected_collision_from(&coeffs, 0).unwrap(), column(0)),
        (expected_collision_from(&coeffs, 1).unwrap(), column(1)),
        (model[0].re, column(2)),
        (model[0].im, column(3)),
        (model[1].re, column(4)),
        (model[1].im, column(5)),
    ];
    for (i, (expected, values)) in checks.iter().enumerate() {
        let (mean, se) = mean_and_se(values);
        assert!(
            (mean - expected).abs() <= 5.0 * se + 1e-12,
            "check {i}: sampled {mean} ± {se}, model {expected}"
        );
    }
}
