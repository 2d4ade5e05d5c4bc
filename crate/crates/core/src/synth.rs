//! Seeded synthetic graph generators for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Partition};

/// Erdős–Rényi G(n, p) with unit edge weights.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid generated edges")
}

/// Planted-partition graph: k equal-sized blocks, edge probability `p_in`
/// inside a block and `p_out` across blocks. Returns the graph and the
/// planted ground-truth partition.
pub fn planted_partition(n: usize, k: u32, p_in: f64, p_out: f64, seed: u64) -> (Graph, Partition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = |v: usize| -> u32 { ((v * k as usize) / n) as u32 };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if block(i) == block(j) { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((i as u32, j as u32, 1.0));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("valid generated edges");
    let planted = Partition::new((0..n).map(block).collect(), k).expect("blocks in range");
    (g, planted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_is_seed_deterministic() {
        let a = gnp(30, 0.2, 7);
        let b = gnp(30, 0.2, 7);
        assert_eq!(a.two_m(), b.two_m());
        assert_ne!(a.two_m(), gnp(30, 0.2, 8).two_m());
    }

    #[test]
    fn planted_partition_has_denser_blocks() {
        let (g, p) = planted_partition(60, 3, 0.5, 0.02, 1);
        let q = crate::graph::modularity(&g, &p).unwrap();
        assert!(q > 0.3, "planted structure should be visible, q = {q}");
        assert_eq!(p.group_sizes(), &[20, 20, 20]);
    }
}
