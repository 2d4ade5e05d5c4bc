//! Method runners shared by the partition and bench commands.

use std::time::Instant;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use qpart::graph::{modularity, Graph, Partition};
use qpart::multilevel::{partition_graph, refine};
use qpart::oracle::{brute_force_modularity, simulated_annealing_qubo, SaParams};
use qpart::qubo::{build_qubo, decode_assignment, PenaltyWeights, Repair};

use crate::config::Resolved;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Multilevel pipeline with the Hamiltonian-descent base solve.
    Qhd,
    /// Simulated annealing on the full QUBO (no multilevel, no refinement).
    Sa,
    /// Exhaustive modularity maximization (small graphs only).
    Brute,
    /// Seeded random partition plus greedy refinement.
    Greedy,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Qhd => "qhd",
            Method::Sa => "sa",
            Method::Brute => "brute",
            Method::Greedy => "greedy",
        }
    }
}

/// Result of running one method on one graph.
pub struct MethodOutcome {
    pub partition: Partition,
    pub modularity: f64,
    /// QUBO energy of the solver's raw solution, when one exists.
    pub energy: Option<f64>,
    /// Method-specific detail for the JSON report.
    pub report: serde_json::Value,
    pub wall_ms: f64,
}

pub fn run_method(g: &Graph, k: u32, method: Method, cfg: &Resolved) -> Result<MethodOutcome> {
    let start = Instant::now();
    let outcome = match method {
        Method::Qhd => {
            let pipeline_cfg = cfg.pipeline_config(g, k)?;
            let (p, report) = partition_graph(g, &pipeline_cfg)?;
            let q = modularity(g, &p)?;
            MethodOutcome {
                modularity: q,
                energy: report.base.energy,
                report: serde_json::to_value(&report)?,
                partition: p,
                wall_ms: 0.0,
            }
        }
        Method::Sa => {
            let weights = cfg
                .weights_for(g)
                .unwrap_or_else(|| PenaltyWeights::defaults_for(g));
            let q = build_qubo(g, k, &weights).context("building the QUBO for annealing")?;
            let sa = simulated_annealing_qubo(
                &q,
                &SaParams {
                    sweeps: cfg.sa_sweeps,
                    seed: cfg.seed,
                    ..SaParams::default()
                },
            )?;
            let p = decode_assignment(&q, &sa.solution, Repair::Greedy(g))?;
            let m = modularity(g, &p)?;
            MethodOutcome {
                modularity: m,
                energy: Some(sa.objective),
                report: json!({
                    "sweeps": cfg.sa_sweeps,
                    "evaluations": sa.evaluations,
                    "proven_optimal": sa.proven_optimal,
                }),
                partition: p,
                wall_ms: 0.0,
            }
        }
        Method::Brute => {
            let result = brute_force_modularity(g, k)?;
            MethodOutcome {
                modularity: result.objective,
                energy: None,
                report: json!({
                    "evaluations": result.evaluations,
                    "proven_optimal": result.proven_optimal,
                }),
                partition: result.solution,
                wall_ms: 0.0,
            }
        }
        Method::Greedy => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let p0 = Partition::random(g.node_count(), k, &mut rng);
            let (p, stats) = refine(g, p0, cfg.sweep_cap)?;
            MethodOutcome {
                modularity: stats.modularity_after,
                energy: None,
                report: serde_json::to_value(stats)?,
                partition: p,
                wall_ms: 0.0,
            }
        }
    };
    Ok(MethodOutcome {
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        ..outcome
    })
}

/// Density as a percentage of possible simple-graph edges.
pub fn density_pct(g: &Graph) -> f64 {
    let n = g.node_count() as f64;
    if n < 2.0 {
        return 0.0;
    }
    100.0 * 2.0 * g.edge_count() as f64 / (n * (n - 1.0))
}

/// One row of the bench table / the body of a partition result.
#[derive(Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub density_pct: f64,
    pub k: u32,
    pub method: &'static str,
    pub seed: u64,
    pub config_digest: String,
    pub status: String,
    pub modularity: Option<f64>,
    pub energy: Option<f64>,
    pub wall_time_ms: f64,
}
