mod common;

use common::{random_hermitian, random_state, random_unitary};
use proptest::prelude::*;
use qthermo_core::operator::{gibbs_state, von_neumann_entropy, CMatrix, DensityMatrix};
use qthermo_core::passivity::{ergotropy, is_passive, passive_state};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Minimum of Σ λ_σ(i) E_i over all permutations σ (Heap's algorithm).
fn brute_force_passive_energy(lambda: &[f64], energies: &[f64]) -> f64 {
    let n = lambda.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let cost = |p: &[usize]| p.iter().zip(energies).map(|(&i, e)| lambda[i] * e).sum::<f64>();
    let mut best = cost(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(cost(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn passive_energy_matches_permutation_minimum(seed in any::<u64>(), dim in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(&mut rng, dim);
        let h = random_hermitian(&mut rng, dim);
        let dec = passive_state(&rho, &h).unwrap();
        let oracle = brute_force_passive_energy(&rho.eigenvalues().unwrap(), &h.eigenvalues().unwrap());
        prop_assert!((dec.passive_energy - oracle).abs() < 1e-10);
        prop_assert!(dec.ergotropy >= 0.0);
        prop_assert!((rho.expectation(&h) - dec.passive_energy - dec.ergotropy).abs() < 1e-10);
    }

    #[test]
    fn passive_state_is_a_fixed_point(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(&mut rng, dim);
        let h = random_hermitian(&mut rng, dim);
        let pi = passive_state(&rho, &h).unwrap().passive_state;
        prop_assert!(is_passive(&pi, &h, 1e-9).unwrap());
        prop_assert!(ergotropy(&pi, &h).unwrap() < 1e-10);
        let again = passive_state(&pi, &h).unwrap().passive_state;
        prop_assert!(pi.trace_distance(&again).unwrap() < 1e-9);
        let (s0, s1) = (von_neumann_entropy(&rho).unwrap(), von_neumann_entropy(&pi).unwrap());
        prop_assert!((s0 - s1).abs() < 1e-10);
    }

    #[test]
    fn no_unitary_extracts_more_than_ergotropy(seed in any::<u64>(), dim in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(&mut rng, dim);
        let h = random_hermitian(&mut rng, dim);
        let w = ergotropy(&rho, &h).unwrap();
        let e = rho.expectation(&h);
        for _ in 0..8 {
            let u = random_unitary(&mut rng, dim);
            let extracted = e - rho.transformed(&u).unwrap().expectation(&h);
            prop_assert!(extracted <= w + 1e-10);
        }
    }

    #[test]
    fn gibbs_states_are_passive(seed in any::<u64>(), dim in 2usize..=8, t in 0.05f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, dim);
        let g = gibbs_state(&h, t).unwrap();
        prop_assert!(is_passive(&g, &h, 1e-9).unwrap());
    }
}

#[test]
fn brute_force_oracle_sanity() {
    assert_eq!(brute_force_passive_energy(&[0.7, 0.2, 0.1], &[3.0, 1.0, 0.0]), 0.2 + 0.3);
}

#[test]
fn coherence_breaks_passivity_even_with_ordered_populations() {
    let s = 0.5f64.sqrt();
    let plus = CMatrix::from_real_rows(&[&[0.5, 0.5 * s], &[0.5 * s, 0.5]]);
    let rho = DensityMatrix::new(plus).unwrap();
    let h = qthermo_core::operator::HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
    assert!(!is_passive(&rho, &h, 1e-9).unwrap());
}
