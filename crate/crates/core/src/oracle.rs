//! Ground-truth and comparison solvers: exhaustive enumeration over QUBO
//! vectors and partitions, and a Metropolis simulated-annealing baseline.
//! All of them score candidates through the same `QuboProblem::energy` /
//! `modularity` paths as the main solver.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::qubo::{Couplings, QuboProblem};

/// Outcome of a baseline solve.
#[derive(Clone, Debug)]
pub struct SolveResult<S> {
    pub solution: S,
    pub objective: f64,
    /// Only exhaustive enumeration sets this.
    pub proven_optimal: bool,
    pub wall_time: Duration,
    pub evaluations: u64,
}

/// Exhaustive enumeration cap (2^24 vectors).
pub const BRUTE_QUBO_DIM_CAP: usize = 24;

/// Cap on enumerated partitions after fixing node 0's group.
pub const BRUTE_MODULARITY_CAP: f64 = 1e7;

/// Lexicographic key of a bit-packed vector: numeric order of the reversed
/// bits equals lexicographic order of (x_0, x_1, ...).
#[inline]
fn lex_key(bits: u64) -> u64 {
    bits.reverse_bits()
}

/// Enumerate all 2^dim vectors and return the minimum-energy one, ties
/// broken toward the lexicographically smallest vector. Gray-code
/// incremental evaluation, split across threads in fixed chunks so the
/// result does not depend on the thread count.
pub fn brute_force_qubo(q: &QuboProblem) -> Result<SolveResult<Vec<u8>>> {
    let dim = q.dim();
    if dim == 0 || dim > BRUTE_QUBO_DIM_CAP {
        return Err(Error::VariableCapExceeded {
            dim,
            cap: BRUTE_QUBO_DIM_CAP,
        });
    }
    let start = Instant::now();
    let size: u64 = 1 << dim;
    const CHUNK: u64 = 1 << 14;
    let chunks = size.div_ceil(CHUNK);
    let couplings = Couplings::new(q);

    let (best_e, best_bits) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(size);
            scan_range(q, &couplings, lo, hi)
        })
        .reduce_with(|a, b| {
            if (b.0, lex_key(b.1)) < (a.0, lex_key(a.1)) {
                b
            } else {
                a
            }
        })
        .expect("at least one chunk");

    let solution: Vec<u8> = (0..dim).map(|i| (best_bits >> i & 1) as u8).collect();
    Ok(SolveResult {
        solution,
        objective: best_e,
        proven_optimal: true,
        wall_time: start.elapsed(),
        evaluations: size,
    })
}

/// Scan counters [lo, hi) in Gray-code order, tracking the best
/// (energy, lexicographically smallest bits) candidate.
fn scan_range(q: &QuboProblem, couplings: &Couplings, lo: u64, hi: u64) -> (f64, u64) {
    let dim = q.dim();
    let mut bits = lo ^ (lo >> 1);
    let mut x: Vec<u8> = (0..dim).map(|i| (bits >> i & 1) as u8).collect();
    let mut fields = vec![0.0f64; dim];
    couplings.fields_binary(&x, &mut fields);
    let mut energy = q.energy_bits(bits);

    let mut best = (energy, bits);
    for counter in lo + 1..hi {
        let flip = counter.trailing_zeros() as usize;
        energy += couplings.flip_delta(&x, &fields, flip);
        couplings.apply_flip(&mut x, &mut fields, flip);
        bits ^= 1 << flip;
        if (energy, lex_key(bits)) < (best.0, lex_key(best.1)) {
            best = (energy, bits);
        }
    }
    // Re-score the winner through the exact path to shed accumulated
    // incremental drift.
    (q.energy_bits(best.1), best.1)
}

/// Maximize modularity over all k-group assignments with node 0 fixed in
/// group 0 (label-symmetry reduction). Ties keep the lexicographically
/// smallest assignment (depth-first order).
pub fn brute_force_modularity(g: &Graph, k: u32) -> Result<SolveResult<Partition>> {
    if k < 2 {
        return Err(Error::GroupCountTooSmall { k });
    }
    let n = g.node_count();
    if n == 0 {
        return Err(Error::InvalidParameter("empty graph".into()));
    }
    if g.two_m() <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let space = (k as f64).powi(n as i32 - 1);
    if space > BRUTE_MODULARITY_CAP {
        return Err(Error::SearchSpaceExceeded {
            space,
            cap: BRUTE_MODULARITY_CAP,
        });
    }
    let start = Instant::now();
    let two_m = g.two_m();

    // Depth-first over nodes 1..n with incremental intra-weight and
    // degree-sum bookkeeping; leaves evaluate Q in O(k).
    let mut assignment = vec![0u32; n];
    let mut dsum = vec![0.0f64; k as usize];
    dsum[0] = g.degree(0);
    let mut best: Option<(f64, Vec<u32>)> = None;
    let mut leaves = 0u64;

    fn recurse(
        g: &Graph,
        k: u32,
        two_m: f64,
        node: u32,
        intra: f64,
        assignment: &mut Vec<u32>,
        dsum: &mut Vec<f64>,
        best: &mut Option<(f64, Vec<u32>)>,
        leaves: &mut u64,
    ) {
        let n = g.node_count() as u32;
        if node == n {
            *leaves += 1;
            let mut null = 0.0;
            let mut squares: Vec<f64> = dsum.iter().map(|d| d * d).collect();
            squares.sort_unstable_by(|a, b| b.total_cmp(a));
            for s in squares {
                null += s;
            }
            let q = (two_m * intra - null) / (two_m * two_m);
            match best {
                Some((bq, _)) if *bq >= q => {}
                _ => *best = Some((q, assignment.clone())),
            }
            return;
        }
        // Weight from `node` to already-assigned nodes per group, plus the
        // diagonal (always intra).
        let mut wg = vec![0.0f64; k as usize];
        let mut diag = 0.0;
        for (j, w) in g.neighbors(node) {
            if j == node {
                diag = w;
            } else if j < node {
                wg[assignment[j as usize] as usize] += w;
            }
        }
        for c in 0..k {
            assignment[node as usize] = c;
            dsum[c as usize] += g.degree(node);
            // Ordered-pair intra contribution: 2 * links into c, plus diag.
            recurse(
                g,
                k,
                two_m,
                node + 1,
                intra + 2.0 * wg[c as usize] + diag,
                assignment,
                dsum,
                best,
                leaves,
            );
            dsum[c as usize] -= g.degree(node);
        }
        assignment[node as usize] = 0;
    }
    let diag0 = g.edge_weight(0, 0).unwrap_or(0.0);
    recurse(
        g,
        k,
        two_m,
        1,
        diag0,
        &mut assignment,
        &mut dsum,
        &mut best,
        &mut leaves,
    );

    let (objective, best_assignment) = best.expect("at least one leaf");
    let solution = Partition::new(best_assignment, k)?;
    Ok(SolveResult {
        solution,
        objective,
        proven_optimal: true,
        wall_time: start.elapsed(),
        evaluations: leaves,
    })
}

/// Simulated-annealing parameters. `t0` of `None` derives the start
/// temperature from the largest |single-flip delta| at the seeded initial
/// state. The geometric ratio applies per sweep and is independent of the
/// total budget, so doubling `sweeps` extends the same trajectory.
#[derive(Clone, Copy, Debug)]
pub struct SaParams {
    pub t0: Option<f64>,
    pub ratio: f64,
    pub sweeps: usize,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            t0: None,
            ratio: 0.98,
            sweeps: 500,
            seed: 0,
        }
    }
}

/// Metropolis single-bit-flip annealing with a geometric temperature
/// schedule; deterministic under the seed, reports the best-seen vector.
/// One uniform draw is consumed per proposal, so trajectories are
/// prefix-stable in the sweep budget.
pub fn simulated_annealing_qubo(
    q: &QuboProblem,
    params: &SaParams,
) -> Result<SolveResult<Vec<u8>>> {
    if params.sweeps == 0 {
        return Err(Error::InvalidParameter("sweeps must be at least 1".into()));
    }
    if !(params.ratio > 0.0 && params.ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ratio {} must lie in (0, 1)",
            params.ratio
        )));
    }
    let start = Instant::now();
    let dim = q.dim();
    let couplings = Couplings::new(q);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut x: Vec<u8> = (0..dim).map(|_| rng.random_range(0..2u8)).collect();
    let mut fields = vec![0.0f64; dim];
    couplings.fields_binary(&x, &mut fields);
    let mut energy = q.energy(&x).expect("binary by construction");

    let t0 = params.t0.unwrap_or_else(|| {
        let max_delta = (0..dim)
            .map(|i| couplings.flip_delta(&x, &fields, i).abs())
            .fold(0.0, f64::max);
        max_delta.max(1e-3)
    });

    let mut best_energy = energy;
    let mut best_x = x.clone();
    let mut evaluations = 0u64;

    for sweep in 0..params.sweeps {
        let temp = (t0 * params.ratio.powi(sweep as i32)).max(1e-12);
        for i in 0..dim {
            evaluations += 1;
            let delta = couplings.flip_delta(&x, &fields, i);
            let u = rng.random::<f64>();
            if delta <= 0.0 || u < (-delta / temp).exp() {
                couplings.apply_flip(&mut x, &mut fields, i);
                energy += delta;
                if energy < best_energy {
                    best_energy = energy;
                    best_x.copy_from_slice(&x);
                }
            }
        }
    }

    // Exact re-score of the best-seen vector.
    let objective = q.energy(&best_x).expect("binary");
    Ok(SolveResult {
        solution: best_x,
        objective,
        proven_optimal: false,
        wall_time: start.elapsed(),
        evaluations,
    })
}
