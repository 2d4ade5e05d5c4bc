//! Product-state evolution for problems too large for the full 2^n state.
//!
//! Each variable keeps an independent two-level state psi_i; the coupling
//! enters through an effective potential refreshed from the other
//! variables' occupations at the start of every step:
//!
//!   h_i(t) = kin(t) * (-1/2) [[-1, 1], [1, -1]] + pot(t) * diag(0, eps_i)
//!   eps_i  = Q_ii + b_i + sum_{j != i} (Q_ij + Q_ji) <x_j>,  <x_j> = |psi_j[1]|^2
//!
//! Batch members evolve independently (in parallel) from uniform
//! superpositions; member 0 is exactly uniform, members >= 1 carry seeded
//! relative-phase noise so the batch explores distinct initial conditions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qubo::{Couplings, QuboProblem};

use super::exact::kinetic_propagator;
use super::schedule::QhdSchedule;
use super::WaveState;

/// Default initial relative-phase noise amplitude (radians).
pub const DEFAULT_PHASE_NOISE: f64 = 0.1;

/// Evolve `batch` independent mean-field states with the default noise.
pub fn evolve_meanfield(
    q: &QuboProblem,
    sched: &QhdSchedule,
    batch: usize,
    seed: u64,
) -> Result<Vec<WaveState>> {
    evolve_meanfield_with_noise(q, sched, batch, seed, DEFAULT_PHASE_NOISE)
}

pub fn evolve_meanfield_with_noise(
    q: &QuboProblem,
    sched: &QhdSchedule,
    batch: usize,
    seed: u64,
    phase_noise: f64,
) -> Result<Vec<WaveState>> {
    if batch == 0 {
        return Err(Error::InvalidParameter("batch must be at least 1".into()));
    }
    if !phase_noise.is_finite() || phase_noise < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "phase noise {phase_noise} must be finite and >= 0"
        )));
    }
    sched.validate()?;
    let couplings = Couplings::new(q);

    // Per-member RNG streams derive from the master seed, so parallel and
    // serial execution produce identical batches.
    let states: Vec<WaveState> = (0..batch)
        .into_par_iter()
        .map(|member| evolve_member(&couplings, sched, seed, member, phase_noise))
        .collect();
    Ok(states)
}

fn evolve_member(
    couplings: &Couplings,
    sched: &QhdSchedule,
    seed: u64,
    member: usize,
    phase_noise: f64,
) -> WaveState {
    let dim = couplings.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member as u64);
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi: Vec<[Complex64; 2]> = (0..dim)
        .map(|_| {
            let theta = if member == 0 {
                0.0
            } else {
                phase_noise * (2.0 * rng.random::<f64>() - 1.0)
            };
            [Complex64::new(amp, 0.0), Complex64::from_polar(amp, theta)]
        })
        .collect();

    let mut occupation = vec![0.5f64; dim];
    let mut eps = vec![0.0f64; dim];
    let dt = sched.dt();

    for step in 0..sched.steps {
        for (i, s) in psi.iter().enumerate() {
            occupation[i] = s[1].norm_sqr();
        }
        for i in 0..dim {
            eps[i] = couplings.field(i, &occupation);
        }

        let t_mid = (step as f64 + 0.5) * dt;
        let tau = 0.5 * dt * sched.kinetic_coeff(t_mid);
        let theta = dt * sched.potential_coeff(t_mid);
        let (diag, off) = kinetic_propagator(tau);

        for (i, s) in psi.iter_mut().enumerate() {
            let [a, b] = *s;
            let a1 = diag * a + off * b;
            let b1 = off * a + diag * b;
            let b2 = b1 * Complex64::from_polar(1.0, -theta * eps[i]);
            s[0] = diag * a1 + off * b2;
            s[1] = off * a1 + diag * b2;
        }
    }

    WaveState::MeanField(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qhd::exact::evolve_exact;

    fn diagonal_problem(b: Vec<f64>) -> QuboProblem {
        let n = b.len() as u32;
        QuboProblem::new(n, 1, Vec::new(), b, 0.0).unwrap()
    }

    #[test]
    fn all_zero_qubo_keeps_half_occupation() {
        let q = diagonal_problem(vec![0.0; 8]);
        let states = evolve_meanfield(&q, &QhdSchedule::default(), 1, 3).unwrap();
        match &states[0] {
            WaveState::MeanField(psi) => {
                for s in psi {
                    assert!((s[1].norm_sqr() - 0.5).abs() < 1e-6);
                    let norm = (s[0].norm_sqr() + s[1].norm_sqr()).sqrt();
                    assert!((norm - 1.0).abs() < 1e-6);
                }
            }
            _ => panic!("expected mean-field state"),
        }
    }

    #[test]
    fn separable_problem_matches_exact_single_variable_evolutions() {
        let b = vec![0.7, -0.4, 1.3, -1.0];
        let q = diagonal_problem(b.clone());
        let sched = QhdSchedule::linear_ramp(5.0, 400);
        let states = evolve_meanfield(&q, &sched, 1, 0).unwrap();
        let psi = match &states[0] {
            WaveState::MeanField(psi) => psi,
            _ => unreachable!(),
        };
        for (i, &bi) in b.iter().enumerate() {
            let single = diagonal_problem(vec![bi]);
            let exact = evolve_exact(&single, &sched).unwrap();
            let amps = match exact {
                WaveState::Exact(a) => a,
                _ => unreachable!(),
            };
            for lvl in 0..2 {
                let diff = (psi[i][lvl] - amps[lvl]).norm();
                assert!(diff < 1e-8, "var {i} level {lvl}: diff {diff}");
            }
        }
    }

    #[test]
    fn batches_are_deterministic_and_member0_is_clean() {
        let q = diagonal_problem(vec![0.2, -0.3, 0.5]);
        let sched = QhdSchedule::linear_ramp(2.0, 100);
        let a = evolve_meanfield(&q, &sched, 4, 9).unwrap();
        let b = evolve_meanfield(&q, &sched, 4, 9).unwrap();
        for (sa, sb) in a.iter().zip(&b) {
            match (sa, sb) {
                (WaveState::MeanField(pa), WaveState::MeanField(pb)) => {
                    for (x, y) in pa.iter().zip(pb) {
                        assert_eq!(x[0], y[0]);
                        assert_eq!(x[1], y[1]);
                    }
                }
                _ => panic!("expected mean-field states"),
            }
        }
        // Members with noise differ from member 0.
        match (&a[0], &a[1]) {
            (WaveState::MeanField(p0), WaveState::MeanField(p1)) => {
                assert!(p0.iter().zip(p1).any(|(x, y)| x[1] != y[1]));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn rejects_zero_batch() {
        let q = diagonal_problem(vec![0.0]);
        assert!(evolve_meanfield(&q, &QhdSchedule::default(), 0, 0).is_err());
    }
}
