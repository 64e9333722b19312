use std::collections::BTreeMap;

use coherent_magic::harness::{process_experiment, ExperimentFile};
use coherent_magic::pauli_core::{circuit_to_tableau, derive_seed, sample_encoder, syndrome_map, Pauli, PauliString};
use coherent_magic::statevector::{born_table, ErrorExpansion, StateVector};
use coherent_magic::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Basis index reached by `C† Z^a C |0⟩`, found by gate-level simulation.
fn simulated_outcome(spec: &coherent_magic::pauli_core::CircuitSpec, a: u64) -> usize {
    let n = spec.n;
    let mut s = StateVector::zero(n).unwrap();
    s.apply_circuit(spec).unwrap();
    let mut z = PauliString::identity(n);
    for j in (0..n).filter(|j| a >> j & 1 == 1) {
        z.set_site(j, Pauli::Z);
    }
    s.apply_pauli(&z).unwrap();
    s.apply_circuit_inverse(spec).unwrap();
    let probs = s.probabilities();
    let idx = probs.iter().position(|&p| p > 0.5).expect("a Pauli error keeps a basis state");
    assert!((probs[idx] - 1.0).abs() < 1e-10);
    idx
}

#[test]
fn syndrome_map_predicts_simulated_outcomes() {
    let n = 10;
    let measured: Vec<usize> = (1..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..50u64 {
        let spec = sample_encoder(n, n, derive_seed(99, &[i])).unwrap();
        let map = syndrome_map(&circuit_to_tableau(&spec), &measured).unwrap();
        let mut errors: Vec<u64> = (0..n).map(|j| 1 << j).collect();
        errors.extend((0..20).map(|_| rng.gen_range(0..1u64 << n)));
        for a in errors {
            let outcome = simulated_outcome(&spec, a) as u64;
            assert_eq!(map.matrix.mul_vec(&[a])[0], outcome >> 1, "encoder {i}, error {a:#b}");
        }
    }
}

fn experiment(counts: &[(&str, u64)]) -> ExperimentFile {
    ExperimentFile {
        seed: 5,
        n: 4,
        k: 2,
        d: 4,
        alpha: 0.8,
        counts: counts.iter().map(|&(s, c)| (s.to_string(), c)).collect(),
        circuit: None,
    }
}

#[test]
fn point_mass_counts_score_the_ideal_probability() {
    let exp = experiment(&[("0000", 250)]);
    let state = ErrorExpansion::new(&circuit_to_tableau(&sample_encoder(4, 4, 5).unwrap()))
        .unwrap()
        .state(0.8);
    let joint = born_table(&state, &[0, 1, 2, 3]).unwrap();
    let syn = joint.marginal(&[2, 3]).unwrap();
    let rec = process_experiment(&exp, "mass").unwrap();
    let expected = -joint.probs()[0].log2() + syn.probs()[0].log2();
    assert!((rec.shannon - expected).abs() < 1e-12, "{} vs {expected}", rec.shannon);
    assert!((rec.renyi - expected).abs() < 1e-12);
    assert_eq!(rec.shots, 250);
}

#[test]
fn counts_outside_the_ideal_support_are_rejected() {
    let state = ErrorExpansion::new(&circuit_to_tableau(&sample_encoder(4, 4, 5).unwrap()))
        .unwrap()
        .state(0.0);
    let support: BTreeMap<usize, f64> =
        state.probabilities().into_iter().enumerate().filter(|&(_, p)| p > 1e-15).collect();
    let outside = (0..16).find(|i| !support.contains_key(i)).unwrap();
    let mut exp = experiment(&[]);
    exp.alpha = 0.0;
    exp.counts.insert(format!("{outside:04b}"), 10);
    assert!(matches!(process_experiment(&exp, "zero"), Err(Error::EmptySupport)));
}
