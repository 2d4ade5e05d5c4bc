//! Multilevel invariants on seeded random graphs: weight conservation,
//! modularity-preserving projection, monotone refinement, and termination.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpart::graph::{modularity, Graph, Partition};
use qpart::multilevel::{coarsen, project, refine, MatchWeightParams, PipelineConfig};
use qpart::qhd::QhdSchedule;
use qpart::synth::gnp;

fn nonempty_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let g = gnp(n, p, seed);
    if g.two_m() > 0.0 {
        g
    } else {
        Graph::from_edges(n, [(0, 1, 1.0)]).unwrap()
    }
}

#[test]
fn coarsening_conserves_weight_and_terminates() {
    let params = MatchWeightParams::default();
    for seed in 0..25u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(10..=200usize);
        let g = nonempty_gnp(n, 0.08, seed);
        let mut sizes = vec![g.node_count()];
        let mut current = g.clone();
        loop {
            if current.node_count() < 2 {
                break;
            }
            let level = coarsen(&current, &params).unwrap();
            let fine_2m = current.two_m();
            let coarse_2m = level.graph.two_m();
            assert!(
                (fine_2m - coarse_2m).abs() <= 1e-9 * fine_2m,
                "seed {seed}: 2m {fine_2m} -> {coarse_2m}"
            );
            // Mapping is total and onto.
            let nc = level.graph.node_count();
            let mut hit = vec![false; nc];
            for &c in &level.mapping {
                hit[c as usize] = true;
            }
            assert!(hit.iter().all(|&h| h));
            if nc >= current.node_count() {
                break; // nothing left to match
            }
            sizes.push(nc);
            current = level.graph;
            if current.node_count() <= 4 {
                break;
            }
        }
        assert!(sizes.windows(2).all(|w| w[1] < w[0]), "sizes {sizes:?}");
    }
}

#[test]
fn projection_preserves_modularity() {
    let params = MatchWeightParams::default();
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.random_range(8..=200usize);
        let k = rng.random_range(2..=5u32);
        let g = nonempty_gnp(n, 0.1, seed);
        let level = coarsen(&g, &params).unwrap();
        let coarse_p = Partition::random(level.graph.node_count(), k, &mut rng);
        let fine_p = project(&coarse_p, &level).unwrap();
        let qc = modularity(&level.graph, &coarse_p).unwrap();
        let qf = modularity(&g, &fine_p).unwrap();
        assert!(
            (qc - qf).abs() <= 1e-9,
            "seed {seed}: coarse {qc} vs fine {qf}"
        );
    }
}

#[test]
fn refinement_never_decreases_modularity() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let n = rng.random_range(8..=200usize);
        let k = rng.random_range(2..=6u32);
        let g = nonempty_gnp(n, 0.08, seed * 13 + 1);
        let p = Partition::random(n, k, &mut rng);
        let q0 = modularity(&g, &p).unwrap();
        let (refined, stats) = refine(&g, p, 20).unwrap();
        let q1 = modularity(&g, &refined).unwrap();
        assert!(q1 >= q0 - 1e-12, "seed {seed}: {q0} -> {q1}");
        assert!((stats.modularity_after - q1).abs() < 1e-15);
        assert!(stats.sweeps <= 20);
    }
}

#[test]
fn karate_refinement_from_random_start_improves() {
    let text = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/karate.edges"),
    )
    .expect("bundled karate fixture");
    let g = qpart::load_edge_list(std::io::Cursor::new(text)).unwrap();
    assert_eq!(g.node_count(), 34);
    assert_eq!(g.edge_count(), 78);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = Partition::random(34, 4, &mut rng);
    let q0 = modularity(&g, &p).unwrap();
    let (refined, _) = refine(&g, p, 20).unwrap();
    let q1 = modularity(&g, &refined).unwrap();
    assert!(q1 > q0, "random start {q0} must strictly improve, got {q1}");
    assert!(q1 > 0.30, "refined karate modularity {q1}");
}

#[test]
fn pipeline_handles_disconnected_and_repairs_to_valid_partitions() {
    // Two components plus isolated-ish tail; the pipeline must always
    // return a fully assigned partition.
    for seed in 0..10u64 {
        let g = nonempty_gnp(120, 0.05, 3000 + seed);
        let mut cfg = PipelineConfig::new(3);
        cfg.theta = 40;
        cfg.solver.schedule = QhdSchedule::linear_ramp(6.0, 150);
        cfg.solver.batch = 2;
        cfg.solver.samples = 8;
        cfg.solver.seed = seed;
        let (p, report) = qpart::partition_graph(&g, &cfg).unwrap();
        assert_eq!(p.len(), 120);
        assert_eq!(p.group_sizes().iter().sum::<u32>(), 120);
        assert!(p.assignment().iter().all(|&c| c < 3));
        assert!(report.timings.total_ms >= 0.0);
    }
}
