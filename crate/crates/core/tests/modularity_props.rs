//! Modularity invariants on seeded random graphs.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpart::graph::{modularity, modularity_gain, Graph, Partition};

fn random_weighted(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.random::<f64>() < density {
                edges.push((i, j, 0.25 + rng.random::<f64>()));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1, 1.0));
    }
    Graph::from_edges(n, edges).unwrap()
}

#[test]
fn incremental_gain_equals_full_recompute() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let n = rng.random_range(4..=50usize);
        let k = rng.random_range(2..=5u32);
        let g = random_weighted(n, 0.3, seed);
        let p = Partition::random(n, k, &mut rng);
        let before = modularity(&g, &p).unwrap();
        for _ in 0..10 {
            let v = rng.random_range(0..n as u32);
            let target = rng.random_range(0..k);
            let gain = modularity_gain(&g, &p, v, target).unwrap();
            let mut moved = p.clone();
            moved.set_group(v, target);
            let after = modularity(&g, &moved).unwrap();
            assert!(
                (gain - (after - before)).abs() < 1e-10,
                "seed {seed}: gain {gain} vs {}",
                after - before
            );
        }
    }
}

#[test]
fn relabeling_groups_leaves_modularity_unchanged() {
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(50 + seed);
        let n = rng.random_range(3..=40usize);
        let k = rng.random_range(2..=6u32);
        let g = random_weighted(n, 0.4, seed);
        let p = Partition::random(n, k, &mut rng);
        // Rotate labels by one as a representative permutation.
        let relabeled: Vec<u32> = p.assignment().iter().map(|&c| (c + 1) % k).collect();
        let p2 = Partition::new(relabeled, k).unwrap();
        let q1 = modularity(&g, &p).unwrap();
        let q2 = modularity(&g, &p2).unwrap();
        assert_eq!(q1.to_bits(), q2.to_bits(), "seed {seed}");
    }
}

#[test]
fn single_group_partition_is_exactly_zero() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=100usize);
        let g = random_weighted(n, rng.random_range(0.05..0.5), seed);
        let p = Partition::constant(n, 1);
        assert_eq!(modularity(&g, &p).unwrap(), 0.0, "seed {seed}");
    }
}

#[test]
fn all_singletons_matches_direct_formula() {
    for seed in 0..20u64 {
        let n = 3 + (seed as usize % 20);
        let g = random_weighted(n, 0.4, 777 + seed);
        let p = Partition::new((0..n as u32).collect(), n as u32).unwrap();
        let q = modularity(&g, &p).unwrap();
        let two_m = g.two_m();
        let mut direct = 0.0;
        for i in 0..n as u32 {
            let a_ii = g.edge_weight(i, i).unwrap_or(0.0);
            direct += a_ii - g.degree(i) * g.degree(i) / two_m;
        }
        direct /= two_m;
        assert!((q - direct).abs() < 1e-12, "seed {seed}: {q} vs {direct}");
    }
}

#[test]
fn modularity_is_scale_invariant() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(31 + seed);
        let n = rng.random_range(3..=40usize);
        let g = random_weighted(n, 0.4, seed);
        let scale = 10f64.powf(rng.random_range(-3.0..3.0));
        // from_edges doubles self-edge weights, so halve stored diagonals.
        let edges: Vec<(u32, u32, f64)> = g
            .upper_entries()
            .map(|(i, j, w)| {
                let w = w * scale;
                if i == j {
                    (i, j, w / 2.0)
                } else {
                    (i, j, w)
                }
            })
            .collect();
        let gs = Graph::from_edges(n, edges).unwrap();
        let k = rng.random_range(2..=5u32);
        let p = Partition::random(n, k, &mut rng);
        let q1 = modularity(&g, &p).unwrap();
        let q2 = modularity(&gs, &p).unwrap();
        let denom = q1.abs().max(1e-30);
        assert!(
            ((q1 - q2) / denom).abs() < 1e-10,
            "seed {seed}: {q1} vs {q2}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Permuting group labels never changes Q, for arbitrary permutations.
    #[test]
    fn prop_relabel_invariance(seed in 0u64..1000, perm_seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=30usize);
        let k = rng.random_range(2..=6u32);
        let g = random_weighted(n, 0.35, seed);
        let p = Partition::random(n, k, &mut rng);

        let mut perm: Vec<u32> = (0..k).collect();
        let mut prng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..perm.len()).rev() {
            let j = prng.random_range(0..=i);
            perm.swap(i, j);
        }
        let relabeled: Vec<u32> = p.assignment().iter().map(|&c| perm[c as usize]).collect();
        let p2 = Partition::new(relabeled, k).unwrap();
        prop_assert_eq!(
            modularity(&g, &p).unwrap().to_bits(),
            modularity(&g, &p2).unwrap().to_bits()
        );
    }
}
