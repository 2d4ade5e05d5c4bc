//! Multilevel partition pipeline: heavy-edge-matching coarsening, a QUBO
//! base solve, and projection plus greedy modularity refinement back down
//! the hierarchy.
//!
//! Coarse graphs carry aggregated weights and self-loops (a matched pair's
//! internal edge becomes A_uv + A_vu on the super-node diagonal), which
//! conserves 2m at every level and makes projection preserve modularity
//! exactly up to rounding.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{modularity, modularity_gain_with, Graph, GroupDegrees, Partition};
use crate::qhd::{solve_qubo, SolverParams};
use crate::qubo::{build_qubo_capped, decode_assignment, PenaltyWeights, Repair,
    DEFAULT_VARIABLE_CAP};

/// Weights of the two match-score terms: `alpha` on neighborhood overlap,
/// `beta` on normalized edge weight.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MatchWeightParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for MatchWeightParams {
    fn default() -> Self {
        MatchWeightParams {
            alpha: 0.5,
            beta: 0.5,
        }
    }
}

impl MatchWeightParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.beta >= 0.0 && self.alpha + self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "match weights alpha = {}, beta = {} must be >= 0 with a positive sum",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }
}

/// One coarsening step: the coarse graph plus the fine-to-coarse mapping.
#[derive(Clone, Debug)]
pub struct CoarseningLevel {
    pub graph: Graph,
    /// mapping[fine_node] = coarse node; total and onto.
    pub mapping: Vec<u32>,
}

/// Match score of an edge (u, v): `alpha * J + beta * A_uv / max_w` where
/// J is the Jaccard overlap of the endpoint neighborhoods with u, v, and
/// self-loops removed (0 when both reduced neighborhoods are empty) and
/// max_w is the largest off-diagonal weight in the graph.
pub fn match_weight(g: &Graph, u: u32, v: u32, params: &MatchWeightParams) -> Result<f64> {
    params.validate()?;
    if u == v {
        return Err(Error::NotAnEdge { u, v });
    }
    if g.edge_weight(u, v).is_none() {
        return Err(Error::NotAnEdge { u, v });
    }
    let a_uv = g.edge_weight(u, v).expect("checked above");

    // Two-pointer intersection/union over the sorted neighbor lists,
    // skipping the endpoints themselves.
    let mut nu = g.neighbors(u).map(|(j, _)| j).filter(|&j| j != u && j != v);
    let mut nv = g.neighbors(v).map(|(j, _)| j).filter(|&j| j != u && j != v);
    let mut a = nu.next();
    let mut b = nv.next();
    let mut inter = 0usize;
    let mut union = 0usize;
    while a.is_some() || b.is_some() {
        match (a, b) {
            (Some(x), Some(y)) if x == y => {
                inter += 1;
                union += 1;
                a = nu.next();
                b = nv.next();
            }
            (Some(x), Some(y)) if x < y => {
                union += 1;
                a = nu.next();
            }
            (Some(_), Some(_)) => {
                union += 1;
                b = nv.next();
            }
            (Some(_), None) => {
                union += 1;
                a = nu.next();
            }
            (None, Some(_)) => {
                union += 1;
                b = nv.next();
            }
            (None, None) => unreachable!(),
        }
    }
    let jaccard = if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    };
    let max_w = g.max_offdiag_weight();
    let weight_term = if max_w > 0.0 { a_uv / max_w } else { 0.0 };
    Ok(params.alpha * jaccard + params.beta * weight_term)
}

/// One round of greedy maximal matching by descending match score (ties by
/// lower endpoint ids), merging matched pairs into super-nodes. Unmatched
/// nodes pass through; parallel edges between super-nodes are summed and a
/// matched pair's internal edge becomes a self-loop.
pub fn coarsen(g: &Graph, params: &MatchWeightParams) -> Result<CoarseningLevel> {
    params.validate()?;
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "coarsening needs at least 2 nodes".into(),
        ));
    }

    let mut scored: Vec<(f64, u32, u32)> = Vec::with_capacity(g.edge_count());
    for (u, v, _) in g.upper_entries() {
        if u != v {
            let s = match_weight(g, u, v, params).expect("stored edge");
            scored.push((s, u, v));
        }
    }
    scored.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut partner: Vec<Option<u32>> = vec![None; n];
    for &(_, u, v) in &scored {
        if partner[u as usize].is_none() && partner[v as usize].is_none() {
            partner[u as usize] = Some(v);
            partner[v as usize] = Some(u);
        }
    }

    // Coarse ids in order of first appearance by fine id.
    let mut mapping = vec![u32::MAX; n];
    let mut nc = 0u32;
    for u in 0..n as u32 {
        if mapping[u as usize] != u32::MAX {
            continue;
        }
        mapping[u as usize] = nc;
        if let Some(v) = partner[u as usize] {
            mapping[v as usize] = nc;
        }
        nc += 1;
    }

    let mut triplets: Vec<(u32, u32, f64)> = Vec::with_capacity(g.edge_count());
    for (u, v, w) in g.upper_entries() {
        let cu = mapping[u as usize];
        let cv = mapping[v as usize];
        if u == v {
            triplets.push((cu, cu, w));
        } else if cu == cv {
            triplets.push((cu, cu, 2.0 * w)); // A_uv + A_vu folds onto the diagonal
        } else {
            triplets.push((cu.min(cv), cu.max(cv), w));
        }
    }
    let graph = Graph::from_matrix_triplets(nc as usize, triplets, None)?;
    Ok(CoarseningLevel { graph, mapping })
}

/// Map a coarse partition back to the finer level through the super-node
/// mapping.
pub fn project(coarse: &Partition, level: &CoarseningLevel) -> Result<Partition> {
    if coarse.len() != level.graph.node_count() {
        return Err(Error::MappingMismatch {
            mapping_len: level.graph.node_count(),
            partition_len: coarse.len(),
        });
    }
    let assignment: Vec<u32> = level
        .mapping
        .iter()
        .map(|&s| coarse.group_of(s))
        .collect();
    Partition::new(assignment, coarse.k())
}

/// Refinement statistics.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RefineStats {
    pub sweeps: usize,
    pub moves: usize,
    pub modularity_before: f64,
    pub modularity_after: f64,
}

/// Minimum accepted gain; guards against ulp-level move oscillation.
const MIN_GAIN: f64 = 1e-12;

/// Greedy refinement: sweep nodes in id order, moving each to the
/// neighboring group (or staying) with the largest positive modularity
/// gain, ties to the lowest group id. Stops after a moveless sweep or
/// `sweep_cap` sweeps. Modularity never decreases.
pub fn refine(g: &Graph, p: Partition, sweep_cap: usize) -> Result<(Partition, RefineStats)> {
    if sweep_cap == 0 {
        return Err(Error::InvalidParameter("sweep_cap must be at least 1".into()));
    }
    let q_before = modularity(g, &p)?;
    let mut p = p;
    let k = p.k() as usize;
    let mut gd = GroupDegrees::new(g, &p);
    let n = g.node_count();
    let mut moves = 0usize;
    let mut sweeps = 0usize;
    let mut candidates: Vec<u32> = Vec::with_capacity(k);

    for _ in 0..sweep_cap {
        sweeps += 1;
        let mut moved_this_sweep = 0usize;
        for v in 0..n as u32 {
            let cur = p.group_of(v);
            candidates.clear();
            for (j, _) in g.neighbors(v) {
                if j != v {
                    candidates.push(p.group_of(j));
                }
            }
            candidates.sort_unstable();
            candidates.dedup();

            let mut best_group = cur;
            let mut best_gain = MIN_GAIN;
            for &c in &candidates {
                if c == cur {
                    continue;
                }
                let gain = modularity_gain_with(g, &p, &gd, v, c);
                if gain > best_gain {
                    best_gain = gain;
                    best_group = c;
                }
            }
            if best_group != cur {
                gd.apply_move(g.degree(v), cur, best_group);
                p.set_group(v, best_group);
                moved_this_sweep += 1;
            }
        }
        moves += moved_this_sweep;
        if moved_this_sweep == 0 {
            break;
        }
    }

    let q_after = modularity(g, &p)?;
    debug_assert!(q_after >= q_before - 1e-9);
    Ok((
        p,
        RefineStats {
            sweeps,
            moves,
            modularity_before: q_before,
            modularity_after: q_after,
        },
    ))
}

/// Pipeline configuration. `weights` of `None` uses
/// [`PenaltyWeights::defaults_for`] on the base graph.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub k: u32,
    /// Coarsen until the level has at most this many nodes.
    pub theta: usize,
    pub match_params: MatchWeightParams,
    pub sweep_cap: usize,
    pub solver: SolverParams,
    pub weights: Option<PenaltyWeights>,
    pub variable_cap: usize,
    /// Independent base-solve restarts (seeds derived from the solver
    /// seed); the run keeping the best final modularity wins. The coarsening
    /// hierarchy is deterministic and shared across restarts.
    pub restarts: usize,
}

impl PipelineConfig {
    pub fn new(k: u32) -> PipelineConfig {
        PipelineConfig {
            k,
            theta: 512,
            match_params: MatchWeightParams::default(),
            sweep_cap: 20,
            solver: SolverParams::default(),
            weights: None,
            variable_cap: DEFAULT_VARIABLE_CAP,
            restarts: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::GroupCountTooSmall { k: self.k });
        }
        if self.theta < self.k as usize {
            return Err(Error::InvalidParameter(format!(
                "theta = {} must be at least k = {}",
                self.theta, self.k
            )));
        }
        if self.sweep_cap == 0 {
            return Err(Error::InvalidParameter("sweep_cap must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        self.match_params.validate()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TracePoint {
    pub stage: String,
    pub level: usize,
    pub modularity: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseSolveReport {
    pub backend: String,
    pub qubo_dim: usize,
    pub energy: Option<f64>,
    /// True when the QUBO solve failed and a seeded random partition was
    /// refined instead.
    pub fallback: bool,
    pub fallback_reason: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PhaseTimings {
    pub coarsen_ms: f64,
    pub solve_ms: f64,
    pub refine_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    /// Level 0 is the input graph; further entries are coarsened levels.
    pub levels: Vec<LevelReport>,
    /// Trace of the winning restart.
    pub modularity_trace: Vec<TracePoint>,
    /// Base solve of the winning restart.
    pub base: BaseSolveReport,
    /// Final modularity of every restart, in restart order.
    pub restart_modularities: Vec<f64>,
    pub timings: PhaseTimings,
}

/// Run the full multilevel pipeline and return the partition of the input
/// graph plus a report of sizes, the modularity trace, and phase timings.
/// The coarsening hierarchy is built once; each restart reruns the base
/// solve and the uncoarsening refinement under a derived seed, and the
/// restart with the best final modularity wins.
pub fn partition_graph(g: &Graph, cfg: &PipelineConfig) -> Result<(Partition, PipelineReport)> {
    cfg.validate()?;
    if g.two_m() <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let total_start = Instant::now();
    let mut timings = PhaseTimings::default();
    let mut levels: Vec<CoarseningLevel> = Vec::new();

    let coarsen_start = Instant::now();
    while graph_at(g, &levels).node_count() > cfg.theta {
        let level = {
            let cur = graph_at(g, &levels);
            coarsen(cur, &cfg.match_params)?
        };
        if level.graph.node_count() >= graph_at(g, &levels).node_count() {
            break; // no matchable edge left
        }
        levels.push(level);
    }
    timings.coarsen_ms = coarsen_start.elapsed().as_secs_f64() * 1e3;

    let mut report_levels = vec![LevelReport {
        level: 0,
        nodes: g.node_count(),
        edges: g.edge_count(),
    }];
    for (i, l) in levels.iter().enumerate() {
        report_levels.push(LevelReport {
            level: i + 1,
            nodes: l.graph.node_count(),
            edges: l.graph.edge_count(),
        });
    }

    let downstream_start = Instant::now();
    let mut best: Option<(f64, Partition, Vec<TracePoint>, BaseSolveReport)> = None;
    let mut restart_modularities = Vec::with_capacity(cfg.restarts);
    for restart in 0..cfg.restarts {
        let seed = cfg.solver.seed.wrapping_add(restart as u64);
        let (p, trace, base_report, solve_ms) = run_once(g, &levels, cfg, seed)?;
        timings.solve_ms += solve_ms;
        let q = modularity(g, &p)?;
        restart_modularities.push(q);
        match &best {
            Some((bq, ..)) if *bq >= q => {}
            _ => best = Some((q, p, trace, base_report)),
        }
    }
    timings.refine_ms =
        (downstream_start.elapsed().as_secs_f64() * 1e3 - timings.solve_ms).max(0.0);
    timings.total_ms = total_start.elapsed().as_secs_f64() * 1e3;

    let (_, partition, trace, base_report) = best.expect("at least one restart");
    let report = PipelineReport {
        levels: report_levels,
        modularity_trace: trace,
        base: base_report,
        restart_modularities,
        timings,
    };
    Ok((partition, report))
}

/// One base solve plus the full uncoarsening pass under one solver seed.
fn run_once(
    g: &Graph,
    levels: &[CoarseningLevel],
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<(Partition, Vec<TracePoint>, BaseSolveReport, f64)> {
    let base_graph = graph_at(g, levels);
    let base_level = levels.len();
    let mut trace = Vec::new();

    let solve_start = Instant::now();
    let (mut partition, base_report) = match solve_base(base_graph, cfg, seed) {
        Ok((p, backend, dim, energy)) => (
            p,
            BaseSolveReport {
                backend,
                qubo_dim: dim,
                energy: Some(energy),
                fallback: false,
                fallback_reason: None,
            },
        ),
        Err(err) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Partition::random(base_graph.node_count(), cfg.k, &mut rng);
            (
                p,
                BaseSolveReport {
                    backend: "fallback-random".into(),
                    qubo_dim: base_graph.node_count() * cfg.k as usize,
                    energy: None,
                    fallback: true,
                    fallback_reason: Some(err.to_string()),
                },
            )
        }
    };
    let solve_ms = solve_start.elapsed().as_secs_f64() * 1e3;

    let (refined, stats) = refine(base_graph, partition, cfg.sweep_cap)?;
    partition = refined;
    trace.push(TracePoint {
        stage: "base-solve".into(),
        level: base_level,
        modularity: stats.modularity_before,
    });
    trace.push(TracePoint {
        stage: "refine".into(),
        level: base_level,
        modularity: stats.modularity_after,
    });

    // Uncoarsening: project each level down, then refine on the finer graph.
    for i in (0..levels.len()).rev() {
        let fine = if i == 0 { g } else { &levels[i - 1].graph };
        let projected = project(&partition, &levels[i])?;
        trace.push(TracePoint {
            stage: "project".into(),
            level: i,
            modularity: modularity(fine, &projected)?,
        });
        let (refined, stats) = refine(fine, projected, cfg.sweep_cap)?;
        partition = refined;
        trace.push(TracePoint {
            stage: "refine".into(),
            level: i,
            modularity: stats.modularity_after,
        });
    }
    Ok((partition, trace, base_report, solve_ms))
}

fn graph_at<'a>(g: &'a Graph, levels: &'a [CoarseningLevel]) -> &'a Graph {
    levels.last().map(|l| &l.graph).unwrap_or(g)
}

fn solve_base(
    base: &Graph,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<(Partition, String, usize, f64)> {
    let weights = cfg
        .weights
        .unwrap_or_else(|| PenaltyWeights::defaults_for(base));
    let q = build_qubo_capped(base, cfg.k, &weights, cfg.variable_cap)?;
    let solver = SolverParams {
        seed,
        ..cfg.solver.clone()
    };
    let sol = solve_qubo(&q, &solver)?;
    let p = decode_assignment(&q, &sol.x, Repair::Greedy(base))?;
    Ok((p, sol.stats.backend.to_string(), q.dim(), sol.energy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cycle4() -> Graph {
        Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    fn two_cliques(size: u32) -> Graph {
        let mut edges = Vec::new();
        for base in [0, size] {
            for i in 0..size {
                for j in i + 1..size {
                    edges.push((base + i, base + j, 1.0));
                }
            }
        }
        Graph::from_edges(2 * size as usize, edges).unwrap()
    }

    #[test]
    fn match_weight_examples() {
        // Diamond: 0-1 share both neighbors {2, 3}; all weights equal.
        let diamond = Graph::from_edges(
            4,
            [
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 3, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
            ],
        )
        .unwrap();
        let p = MatchWeightParams::default();
        let s = match_weight(&diamond, 0, 1, &p).unwrap();
        assert!((s - 1.0).abs() < 1e-15, "identical neighborhoods give {s}");

        // Isolated edge: disjoint (empty) reduced neighborhoods.
        let k2 = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let s = match_weight(&k2, 0, 1, &p).unwrap();
        assert!((s - 0.5).abs() < 1e-15);

        // Triangle {0,1,2} with pendant 3 on node 0: the two
        // triangle-internal nodes share neighbor 0 exactly.
        let tri = Graph::from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (0, 3, 1.0)])
            .unwrap();
        let s12 = match_weight(&tri, 1, 2, &p).unwrap();
        assert!((s12 - 1.0).abs() < 1e-15, "s12 = {s12}");
        let s01 = match_weight(&tri, 0, 1, &p).unwrap();
        assert!((s01 - 0.75).abs() < 1e-15, "s01 = {s01}");

        assert!(matches!(
            match_weight(&tri, 1, 3, &p),
            Err(Error::NotAnEdge { u: 1, v: 3 })
        ));
    }

    #[test]
    fn coarsen_cycle_to_two_supernodes() {
        let g = cycle4();
        let level = coarsen(&g, &MatchWeightParams::default()).unwrap();
        assert_eq!(level.graph.node_count(), 2);
        let fine = g.two_m();
        let coarse = level.graph.two_m();
        assert!((fine - coarse).abs() <= 1e-9 * fine);
    }

    #[test]
    fn coarsen_single_edge_yields_self_loop() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let level = coarsen(&g, &MatchWeightParams::default()).unwrap();
        assert_eq!(level.graph.node_count(), 1);
        // The unit edge folds to a diagonal entry of 2, conserving 2m = 2.
        assert_eq!(level.graph.edge_weight(0, 0), Some(2.0));
        assert_eq!(level.graph.two_m(), g.two_m());
    }

    #[test]
    fn coarsen_star_matches_once_through_center() {
        let mut edges = Vec::new();
        for leaf in 1..=5 {
            edges.push((0, leaf, 1.0));
        }
        let g = Graph::from_edges(6, edges).unwrap();
        let level = coarsen(&g, &MatchWeightParams::default()).unwrap();
        assert_eq!(level.graph.node_count(), 5);
        assert_eq!(level.graph.two_m(), g.two_m());
    }

    #[test]
    fn project_identity_and_pairs() {
        let g = cycle4();
        let level = coarsen(&g, &MatchWeightParams::default()).unwrap();
        let coarse = Partition::new(vec![0, 1], 2).unwrap();
        let fine = project(&coarse, &level).unwrap();
        // Matched pairs land in their super-node's group.
        for v in 0..4u32 {
            assert_eq!(fine.group_of(v), coarse.group_of(level.mapping[v as usize]));
        }
        // Projection preserves modularity.
        let qc = modularity(&level.graph, &coarse).unwrap();
        let qf = modularity(&g, &fine).unwrap();
        assert!((qc - qf).abs() < 1e-12);

        let bad = Partition::new(vec![0, 1, 0], 2).unwrap();
        assert!(project(&bad, &level).is_err());
    }

    #[test]
    fn refine_fixed_point_stays_put() {
        let g = two_cliques(3);
        let p = Partition::new(vec![0, 0, 0, 1, 1, 1], 2).unwrap();
        let (refined, stats) = refine(&g, p.clone(), 10).unwrap();
        assert_eq!(refined.assignment(), p.assignment());
        assert_eq!(stats.moves, 0);
        assert_eq!(stats.sweeps, 1);
    }

    #[test]
    fn refine_improves_unbalanced_k4_split() {
        let g = Graph::from_edges(
            4,
            [
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 3, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap();
        let start = Partition::new(vec![0, 0, 0, 1], 2).unwrap();
        let (refined, stats) = refine(&g, start, 10).unwrap();
        let q_22 = modularity(&g, &Partition::new(vec![0, 0, 1, 1], 2).unwrap()).unwrap();
        let q_final = modularity(&g, &refined).unwrap();
        assert!(q_final >= q_22 - 1e-12, "{q_final} vs {q_22}");
        assert!(stats.modularity_after >= stats.modularity_before);
    }

    #[test]
    fn pipeline_separates_two_cliques_exactly() {
        let g = two_cliques(5);
        let mut cfg = PipelineConfig::new(2);
        cfg.solver.schedule = crate::qhd::QhdSchedule::linear_ramp(10.0, 300);
        let (p, report) = partition_graph(&g, &cfg).unwrap();
        let q = modularity(&g, &p).unwrap();
        assert_eq!(q, 0.5);
        assert_eq!(report.levels.len(), 1, "direct solve below theta");
        assert!(!report.base.fallback);
    }

    #[test]
    fn pipeline_reports_coarsening_levels() {
        let (g, _) = crate::synth::planted_partition(120, 3, 0.4, 0.02, 5);
        let mut cfg = PipelineConfig::new(3);
        cfg.theta = 30;
        cfg.solver.schedule = crate::qhd::QhdSchedule::linear_ramp(10.0, 200);
        cfg.solver.batch = 4;
        cfg.solver.samples = 16;
        let (p, report) = partition_graph(&g, &cfg).unwrap();
        assert!(report.levels.len() > 1);
        assert!(report.levels.windows(2).all(|w| w[1].nodes < w[0].nodes));
        assert_eq!(p.len(), 120);
        let q = modularity(&g, &p).unwrap();
        assert!(q > 0.3, "planted structure recovered, q = {q}");
        // Refinement keeps the trace non-decreasing per level transition.
        for w in report.modularity_trace.windows(2) {
            if w[1].stage == "refine" && w[0].level == w[1].level {
                assert!(w[1].modularity >= w[0].modularity - 1e-9);
            }
        }
    }

    #[test]
    fn pipeline_falls_back_when_base_solve_cannot_build() {
        let g = two_cliques(4);
        let mut cfg = PipelineConfig::new(2);
        cfg.variable_cap = 4; // 8 nodes * k = 16 > 4 forces the fallback
        let (p, report) = partition_graph(&g, &cfg).unwrap();
        assert!(report.base.fallback);
        assert!(report.base.fallback_reason.is_some());
        assert_eq!(p.len(), 8);
        assert_eq!(p.group_sizes().iter().sum::<u32>(), 8);
    }
}
