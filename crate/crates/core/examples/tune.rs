use qpart::graph::modularity;
use qpart::multilevel::{partition_graph, PipelineConfig};
use qpart::oracle::{simulated_annealing_qubo, SaParams};
use qpart::qhd::QhdSchedule;
use qpart::qubo::{build_qubo, decode_assignment, PenaltyWeights, Repair};
use qpart::synth::planted_partition;

fn main() {
    let mut pipeline_wins = 0;
    let mut total_pipe = 0.0;
    let mut total_sa = 0.0;
    for seed in 0..10u64 {
        let (g, _) = planted_partition(500, 4, 0.06, 0.005, seed);

        let t0 = std::time::Instant::now();
        let mut cfg = PipelineConfig::new(4);
        cfg.solver.schedule = QhdSchedule::linear_ramp(10.0, 300);
        cfg.solver.batch = 4;
        cfg.solver.samples = 16;
        cfg.solver.seed = seed;
        cfg.restarts = 4;
        let (p, _) = partition_graph(&g, &cfg).unwrap();
        let q_pipe = modularity(&g, &p).unwrap();
        let t_pipe = t0.elapsed().as_secs_f64();
        total_pipe += t_pipe;

        let t1 = std::time::Instant::now();
        let w = PenaltyWeights::defaults_for(&g);
        let qubo = build_qubo(&g, 4, &w).unwrap();
        let sa = simulated_annealing_qubo(
            &qubo,
            &SaParams { sweeps: 2000, seed, ..SaParams::default() },
        )
        .unwrap();
        let p_sa = decode_assignment(&qubo, &sa.solution, Repair::Greedy(&g)).unwrap();
        let q_sa = modularity(&g, &p_sa).unwrap();
        let t_sa = t1.elapsed().as_secs_f64();
        total_sa += t_sa;

        if q_pipe >= q_sa {
            pipeline_wins += 1;
        }
        println!(
            "seed {seed}: pipeline {q_pipe:.4} ({t_pipe:.1}s) vs SA {q_sa:.4} ({t_sa:.1}s)"
        );
    }
    println!("pipeline wins {pipeline_wins}/10; pipe {total_pipe:.0}s, sa {total_sa:.0}s");
}
