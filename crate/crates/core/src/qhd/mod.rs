//! Simulated quantum Hamiltonian descent over QUBO problems.
//!
//! Two backends: an exact full-state integrator for small problems
//! (dim <= [`EXACT_DIM_CAP`]) and a mean-field product-state integrator
//! that scales linearly in the number of variables. Both evolve under
//! `H(t) = kin(t) * (-1/2 L) + pot(t) * F` and feed measurement samples
//! through greedy rounding.

mod exact;
mod meanfield;
mod sample;
mod schedule;

pub use exact::{evolve_exact, EXACT_DIM_CAP};
pub use meanfield::{evolve_meanfield, evolve_meanfield_with_noise, DEFAULT_PHASE_NOISE};
pub use sample::{greedy_descent, sample_and_round, RoundingOutcome};
pub use schedule::{QhdSchedule, SchedulePreset};

use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qubo::QuboProblem;

/// Normalized amplitude state of one backend.
#[derive(Clone, Debug)]
pub enum WaveState {
    /// Full state over 2^dim bitstrings; bit i of the index is x_i.
    Exact(Vec<Complex64>),
    /// Independent two-level states (psi_i[0], psi_i[1]) per variable.
    MeanField(Vec<[Complex64; 2]>),
}

impl WaveState {
    /// L2 norm (exact) or the largest per-variable norm deviation carrier
    /// (mean-field returns the max per-variable norm).
    pub fn norm(&self) -> f64 {
        match self {
            WaveState::Exact(amps) => amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt(),
            WaveState::MeanField(psi) => psi
                .iter()
                .map(|s| (s[0].norm_sqr() + s[1].norm_sqr()).sqrt())
                .fold(0.0, f64::max),
        }
    }

    /// Measurement distribution over bitstrings (exact backend only).
    pub fn probabilities(&self) -> Vec<f64> {
        match self {
            WaveState::Exact(amps) => amps.iter().map(|a| a.norm_sqr()).collect(),
            WaveState::MeanField(_) => panic!("probabilities() needs the exact backend"),
        }
    }

    /// P(x_i = 1) for one variable, under either backend.
    pub fn marginal(&self, i: usize) -> f64 {
        match self {
            WaveState::Exact(amps) => amps
                .iter()
                .enumerate()
                .filter(|(z, _)| z >> i & 1 == 1)
                .map(|(_, a)| a.norm_sqr())
                .sum(),
            WaveState::MeanField(psi) => psi[i][1].norm_sqr(),
        }
    }
}

/// Backend selection for [`solve_qubo`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Auto,
    Exact,
    MeanField,
}

/// Solver parameters. `batch` and `phase_noise` only affect the mean-field
/// backend; the exact backend evolves a single deterministic state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverParams {
    pub schedule: QhdSchedule,
    pub backend: Backend,
    pub batch: usize,
    pub samples: usize,
    pub seed: u64,
    pub phase_noise: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            schedule: QhdSchedule::default(),
            backend: Backend::Auto,
            batch: 8,
            samples: 32,
            seed: 0,
            phase_noise: DEFAULT_PHASE_NOISE,
        }
    }
}

/// Run statistics for one solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveStats {
    pub backend: &'static str,
    pub steps: usize,
    pub batch: usize,
    pub samples_drawn: usize,
    /// Running best rounded energy after each sample.
    pub best_energy_trace: Vec<f64>,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Best rounded solution of one solve.
#[derive(Clone, Debug)]
pub struct QuboSolution {
    pub x: Vec<u8>,
    pub energy: f64,
    pub stats: SolveStats,
}

/// Evolve, sample, and round. Picks the exact backend when
/// `dim <= EXACT_DIM_CAP` under [`Backend::Auto`], the mean-field backend
/// otherwise. Identical (problem, params) pairs produce identical output.
pub fn solve_qubo(q: &QuboProblem, params: &SolverParams) -> Result<QuboSolution> {
    let start = Instant::now();
    let backend = match params.backend {
        Backend::Auto => {
            if q.dim() <= EXACT_DIM_CAP {
                Backend::Exact
            } else {
                Backend::MeanField
            }
        }
        b => b,
    };
    let (states, backend_name, batch_used) = match backend {
        Backend::Exact => (vec![evolve_exact(q, &params.schedule)?], "exact", 1),
        Backend::MeanField => (
            evolve_meanfield_with_noise(
                q,
                &params.schedule,
                params.batch,
                params.seed,
                params.phase_noise,
            )?,
            "meanfield",
            params.batch,
        ),
        Backend::Auto => unreachable!("resolved above"),
    };

    let outcome = sample_and_round(&states, q, params.samples, params.seed)?;
    let mut best_energy_trace = Vec::with_capacity(outcome.post_descent.len());
    let mut running = f64::INFINITY;
    for &e in &outcome.post_descent {
        running = running.min(e);
        best_energy_trace.push(running);
    }
    let samples_drawn = outcome.post_descent.len();

    Ok(QuboSolution {
        x: outcome.x,
        energy: outcome.energy,
        stats: SolveStats {
            backend: backend_name,
            steps: params.schedule.steps,
            batch: batch_used,
            samples_drawn,
            best_energy_trace,
            wall_time: start.elapsed(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::QuboProblem;

    #[test]
    fn finds_unique_minimum_of_small_problem() {
        // Minimum at x = 0110 (variables 1 and 2 on).
        let quad = vec![(0, 1, 2.0), (1, 2, -1.5), (2, 3, 2.0), (0, 3, 1.0)];
        let linear = vec![1.0, -1.0, -1.0, 1.0];
        let q = QuboProblem::new(4, 1, quad, linear, 0.0).unwrap();
        let expect = (0..16u64)
            .min_by(|&a, &b| q.energy_bits(a).total_cmp(&q.energy_bits(b)))
            .unwrap();
        assert_eq!(expect, 0b0110);
        let sol = solve_qubo(&q, &SolverParams::default()).unwrap();
        assert_eq!(sol.x, vec![0, 1, 1, 0]);
        assert_eq!(sol.energy, q.energy_bits(0b0110));
        assert_eq!(sol.stats.backend, "exact");
    }

    #[test]
    fn repeat_runs_are_bit_identical() {
        let quad = vec![(0, 5, -0.4), (2, 9, 0.8), (3, 7, -1.1)];
        let linear: Vec<f64> = (0..16).map(|i| (i as f64 * 0.3).sin()).collect();
        let q = QuboProblem::new(16, 1, quad, linear, 0.25).unwrap();
        let params = SolverParams {
            batch: 3,
            samples: 5,
            seed: 123,
            ..SolverParams::default()
        };
        let a = solve_qubo(&q, &params).unwrap();
        let b = solve_qubo(&q, &params).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.energy, b.energy);
        assert_eq!(a.stats.best_energy_trace, b.stats.best_energy_trace);
        assert_eq!(a.stats.backend, "meanfield");
    }

    #[test]
    fn large_sparse_problem_uses_meanfield_state_memory() {
        let dim = 2000u32;
        let quad: Vec<(u32, u32, f64)> = (0..dim - 1).map(|i| (i, i + 1, -0.5)).collect();
        let linear = vec![0.1; dim as usize];
        let q = QuboProblem::new(dim, 1, quad, linear, 0.0).unwrap();
        let params = SolverParams {
            schedule: QhdSchedule::linear_ramp(5.0, 50),
            batch: 2,
            samples: 2,
            ..SolverParams::default()
        };
        let states = evolve_meanfield_with_noise(&q, &params.schedule, params.batch, 0, 0.1)
            .unwrap();
        assert_eq!(states.len(), params.batch);
        for s in &states {
            match s {
                WaveState::MeanField(psi) => assert_eq!(psi.len(), dim as usize),
                _ => panic!("expected mean-field state"),
            }
        }
        let sol = solve_qubo(&q, &params).unwrap();
        assert_eq!(sol.stats.backend, "meanfield");
        assert_eq!(sol.x.len(), dim as usize);
    }
}
