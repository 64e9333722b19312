use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::statevector::{BornTable, PROB_FLOOR};

/// Shannon entropy in bits; entries below the probability floor contribute 0.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p >= PROB_FLOOR)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// `Σ p²`.
pub fn collision_probability(table: &BornTable) -> f64 {
    table.probs().iter().map(|p| p * p).sum()
}

fn syndrome_marginal(joint: &BornTable, k: usize) -> Result<BornTable> {
    let bits = joint.register().len();
    if k > bits {
        return Err(Error::InvalidArgument(format!(
            "logical count {k} exceeds register width {bits}"
        )));
    }
    joint.marginal(&(k..bits).collect::<Vec<_>>())
}

/// `S(ℓ,s) − S(s)` in bits; the first `k` register positions are logical.
pub fn conditional_entropy(joint: &BornTable, k: usize) -> Result<f64> {
    let syn = syndrome_marginal(joint, k)?;
    Ok(shannon_entropy(joint.probs()) - shannon_entropy(syn.probs()))
}

/// `−log2 M(ℓ,s) + log2 M(s)` from collision probabilities.
pub fn renyi_conditional_entropy(joint: &BornTable, k: usize) -> Result<f64> {
    let syn = syndrome_marginal(joint, k)?;
    Ok(-collision_probability(joint).log2() + collision_probability(&syn).log2())
}

/// Empirical counts restricted to the support of `ideal` and renormalized.
/// Keys are outcome indices in the ideal table's register convention.
fn project(empirical: &BTreeMap<u64, u64>, ideal: &BornTable) -> Result<Vec<(f64, f64)>> {
    let probs = ideal.probs();
    if !probs.iter().any(|&p| p >= PROB_FLOOR) {
        return Err(Error::EmptySupport);
    }
    let kept: Vec<(u64, f64)> = empirical
        .iter()
        .filter(|(&x, &c)| c > 0 && (x as usize) < probs.len() && probs[x as usize] >= PROB_FLOOR)
        .map(|(&x, &c)| (x, c as f64))
        .collect();
    let total: f64 = kept.iter().map(|(_, c)| c).sum();
    if total == 0.0 {
        return Err(Error::EmptySupport);
    }
    Ok(kept
        .into_iter()
        .map(|(x, c)| (c / total, probs[x as usize]))
        .collect())
}

/// `−Σ p(x) log2 p̃(x)`: empirical frequencies `p` projected onto the ideal
/// support, scored against the ideal probabilities `p̃`.
pub fn cross_entropy_postprocess(empirical: &BTreeMap<u64, u64>, ideal: &BornTable) -> Result<f64> {
    Ok(-project(empirical, ideal)?
        .into_iter()
        .map(|(p, q)| p * q.log2())
        .sum::<f64>())
}

/// Collision analogue `−log2 Σ p(x) p̃(x)` of [`cross_entropy_postprocess`].
pub fn cross_collision_entropy(empirical: &BTreeMap<u64, u64>, ideal: &BornTable) -> Result<f64> {
    Ok(-project(empirical, ideal)?
        .into_iter()
        .map(|(p, q)| p * q)
        .sum::<f64>()
        .log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_has_zero_entropies() {
        let t = BornTable::from_probs(vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(t.probs()), 0.0);
        assert_eq!(conditional_entropy(&t, 1).unwrap(), 0.0);
        assert_eq!(renyi_conditional_entropy(&t, 1).unwrap(), 0.0);
        assert_eq!(collision_probability(&t), 1.0);
    }

    #[test]
    fn uniform_logical_with_fixed_syndrome() {
        // two logical bits uniform, syndrome bit pinned to 1
        let mut p = vec![0.0; 8];
        for l in 0..4 {
            p[l | 4] = 0.25;
        }
        let t = BornTable::from_probs(p).unwrap();
        assert!((conditional_entropy(&t, 2).unwrap() - 2.0).abs() < 1e-12);
        assert!((renyi_conditional_entropy(&t, 2).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn product_distribution_gives_logical_entropy() {
        let pl = [0.3, 0.7];
        let ps = [0.1, 0.2, 0.3, 0.4];
        let mut p = vec![0.0; 8];
        for (s, qs) in ps.iter().enumerate() {
            for (l, ql) in pl.iter().enumerate() {
                p[l | s << 1] = ql * qs;
            }
        }
        let t = BornTable::from_probs(p).unwrap();
        assert!((conditional_entropy(&t, 1).unwrap() - shannon_entropy(&pl)).abs() < 1e-12);
    }

    #[test]
    fn cross_entropy_of_uniform_support() {
        let ideal = BornTable::from_probs(vec![0.25, 0.25, 0.0, 0.25, 0.25, 0.0, 0.0, 0.0]).unwrap();
        let counts = BTreeMap::from([(0, 10), (1, 10), (3, 10), (4, 10), (7, 99)]);
        assert!((cross_entropy_postprocess(&counts, &ideal).unwrap() - 2.0).abs() < 1e-12);
        assert!((cross_collision_entropy(&counts, &ideal).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_support_is_an_error() {
        let ideal = BornTable::from_probs(vec![1.0, 0.0]).unwrap();
        let counts = BTreeMap::from([(1, 5)]);
        assert!(matches!(
            cross_entropy_postprocess(&counts, &ideal),
            Err(Error::EmptySupport)
        ));
    }
}
