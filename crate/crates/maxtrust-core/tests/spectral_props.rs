//! Spectral computations checked against independent brute-force routes on
//! seeded random instances.

use maxtrust_core::graph::{normal_form, PrecedenceGraph};
use maxtrust_core::reference::{
    is_irreducible_by_permutations, max_mean_cycle_brute, random_irreducible_tropical,
    random_reducible_tropical, random_stochastic_positive, scc_by_reachability,
    stationary_by_linear_solve, SplitMix64,
};
use maxtrust_core::spectral::{
    dominant_eigenpair_conventional, eigenvalue_by_traces, max_power, PowerIterationConfig,
};
use maxtrust_core::trust::{eigentrust, EigentrustConfig, TrustVector};
use maxtrust_core::tropical::{TropicalMatrix, TropicalScalar, TropicalVector};

fn random_start(rng: &mut SplitMix64, n: usize) -> TropicalVector {
    TropicalVector::finite(&(0..n).map(|_| rng.range_f64(-1.0, 1.0)).collect::<Vec<_>>())
}

#[test]
fn eigenvalue_routes_agree_on_strongly_connected_instances() {
    let mut rng = SplitMix64::new(101);
    for trial in 0..200 {
        let n = 1 + rng.below(8);
        let c = random_irreducible_tropical(&mut rng, n, -2.0, 3.0, 0.3);
        let r = random_start(&mut rng, n);

        let pair = max_power(&c, &r).unwrap();
        let by_traces = eigenvalue_by_traces(&c).unwrap();
        let by_cycles = max_mean_cycle_brute(&c).unwrap();
        assert!(
            (pair.value - by_traces.raw()).abs() <= 1e-9,
            "trial {trial}: iteration {} vs traces {}",
            pair.value,
            by_traces.raw()
        );
        assert!(
            (pair.value - by_cycles).abs() <= 1e-9,
            "trial {trial}: iteration {} vs cycle enumeration {by_cycles}",
            pair.value
        );

        // The vector must solve Cᵀ ⊗ v = λ ⊗ v entrywise.
        assert!(pair.vector.is_regular());
        let image = c.transpose().mat_vec(&pair.vector).unwrap();
        for u in 0..n {
            let expected = pair.vector.get(u).raw() + pair.value;
            assert!(
                (image.get(u).raw() - expected).abs() <= 1e-9,
                "trial {trial}: residual at {u}"
            );
        }
    }
}

#[test]
fn shifting_all_weights_shifts_the_eigenvalue_and_keeps_the_ranking() {
    let mut rng = SplitMix64::new(102);
    for _ in 0..100 {
        let n = 2 + rng.below(6);
        let c = random_irreducible_tropical(&mut rng, n, -1.0, 2.0, 0.4);
        let r = random_start(&mut rng, n);
        let shift = rng.range_f64(-1.0, 1.0);
        let shifted = TropicalMatrix::from_fn(n, n, |i, j| {
            c.get(i, j).otimes(TropicalScalar::finite(shift))
        });

        let base = max_power(&c, &r).unwrap();
        let moved = max_power(&shifted, &r).unwrap();
        assert!((moved.value - (base.value + shift)).abs() <= 1e-9);
        let rank_base = TrustVector::max_plus(&base.vector).ranking();
        let rank_moved = TrustVector::max_plus(&moved.vector).ranking();
        assert_eq!(rank_base, rank_moved);
    }
}

#[test]
fn irreducibility_check_matches_the_permutation_definition() {
    let mut rng = SplitMix64::new(103);
    for _ in 0..300 {
        let n = 1 + rng.below(5);
        let density = rng.range_f64(0.1, 0.9);
        let a = TropicalMatrix::from_fn(n, n, |_, _| {
            if rng.chance(density) {
                TropicalScalar::finite(rng.range_f64(-1.0, 1.0))
            } else {
                TropicalScalar::EPSILON
            }
        });
        let fast = PrecedenceGraph::of_tropical(&a).unwrap().is_irreducible();
        assert_eq!(fast, is_irreducible_by_permutations(&a));
    }
}

#[test]
fn normal_form_is_sound_on_reducible_instances() {
    let mut rng = SplitMix64::new(104);
    for trial in 0..200 {
        let m = 2 + rng.below(3);
        let sizes: Vec<usize> = (0..m).map(|_| 1 + rng.below(4)).collect();
        let a = random_reducible_tropical(&mut rng, &sizes, -1.0, 2.0, 0.4);
        let n = a.rows();

        let nf = normal_form(&a).unwrap();
        assert_eq!(nf.reconstruct(), a, "trial {trial}: reconstruction");

        // Block upper triangular: nothing below the diagonal blocks.
        let dp = nf.permuted();
        for (bi, ri) in nf.blocks().iter().enumerate() {
            for rj in nf.blocks().iter().take(bi) {
                assert!(
                    !dp.block_is_coupled(ri.clone(), rj.clone()),
                    "trial {trial}: coupling below the diagonal"
                );
            }
        }

        // Diagonal blocks are single vertices or strongly connected.
        for r in nf.blocks() {
            let sub = dp.submatrix(r.clone(), r.clone());
            if r.len() > 1 {
                assert!(PrecedenceGraph::of_tropical(&sub).unwrap().is_irreducible());
            }
        }

        // Blocks are exactly the mutual-reachability classes.
        let oracle = scc_by_reachability(&PrecedenceGraph::of_tropical(&a).unwrap());
        let mut from_nf: Vec<Vec<usize>> = nf
            .blocks()
            .iter()
            .map(|r| {
                let mut ids: Vec<usize> =
                    r.clone().map(|pos| nf.permutation()[pos]).collect();
                ids.sort_unstable();
                ids
            })
            .collect();
        from_nf.sort();
        let mut expected = oracle;
        expected.sort();
        assert_eq!(from_nf, expected, "trial {trial}: component partition");

        // Permutations are bijections on 0..n.
        let mut seen = vec![false; n];
        for &old in nf.permutation() {
            assert!(!seen[old]);
            seen[old] = true;
        }
    }
}

#[test]
fn stochastic_matrices_have_dominant_value_one_with_the_stationary_direction() {
    let mut rng = SplitMix64::new(105);
    for trial in 0..100 {
        let n = 2 + rng.below(8);
        let c = random_stochastic_positive(&mut rng, n);
        let pair = dominant_eigenpair_conventional(&c, &PowerIterationConfig::default()).unwrap();
        assert!((pair.value - 1.0).abs() <= 1e-9, "trial {trial}: value {}", pair.value);
        let sum: f64 = pair.vector.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-9);
        assert!(pair.vector.iter().all(|&v| v > 0.0));

        let pi = stationary_by_linear_solve(&c).unwrap();
        for u in 0..n {
            assert!(
                (pair.vector[u] - pi[u]).abs() <= 1e-9,
                "trial {trial}: entry {u} iteration {} vs solve {}",
                pair.vector[u],
                pi[u]
            );
        }
    }
}

#[test]
fn eigentrust_limit_agrees_with_the_dominant_pair() {
    let mut rng = SplitMix64::new(106);
    for _ in 0..60 {
        let n = 2 + rng.below(8);
        let c = random_stochastic_positive(&mut rng, n);
        let cfg = EigentrustConfig { epsilon: 1e-12, max_iterations: 20_000 };
        let trust = eigentrust(&c, None, &cfg).unwrap().trust;
        let pair = dominant_eigenpair_conventional(&c, &PowerIterationConfig::default()).unwrap();
        for u in 0..n {
            assert!((trust[u] - pair.vector[u]).abs() <= 1e-6);
        }
    }
}
