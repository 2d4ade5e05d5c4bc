//! Measurement sampling and classical rounding.
//!
//! Exact states are sampled from |psi|^2 over bitstrings; mean-field states
//! sample each bit independently from its occupation. Every sample then
//! runs greedy single-flip descent (always flipping the lowest-index
//! improving bit) until it reaches a 1-flip-local minimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubo::{Couplings, QuboProblem};

use super::WaveState;

/// RNG stream namespace for sampling, disjoint from the mean-field
/// evolution streams (which use the raw member index).
const SAMPLE_STREAM_BASE: u64 = 1 << 32;

/// Best rounded solution plus the per-sample energy record.
#[derive(Clone, Debug)]
pub struct RoundingOutcome {
    pub x: Vec<u8>,
    pub energy: f64,
    /// Energy of each raw sample before descent, in draw order.
    pub pre_descent: Vec<f64>,
    /// Energy of each sample after descent, in draw order.
    pub post_descent: Vec<f64>,
}

/// Greedy single-flip descent in place; returns the exact final energy.
/// Each flip strictly lowers the energy, so the loop terminates.
pub fn greedy_descent(couplings: &Couplings, q: &QuboProblem, x: &mut [u8]) -> f64 {
    let dim = couplings.dim();
    let mut fields = vec![0.0f64; dim];
    couplings.fields_binary(x, &mut fields);
    loop {
        let mut flipped = false;
        for i in 0..dim {
            if couplings.flip_delta(x, &fields, i) < 0.0 {
                couplings.apply_flip(x, &mut fields, i);
                flipped = true;
                break;
            }
        }
        if !flipped {
            break;
        }
    }
    q.energy(x).expect("descent keeps x binary")
}

/// Draw `samples_per_state` bitstrings from each state, round them by
/// greedy descent, and return the lowest-energy result. Deterministic for
/// a fixed seed; ties keep the earliest sample.
pub fn sample_and_round(
    states: &[WaveState],
    q: &QuboProblem,
    samples_per_state: usize,
    seed: u64,
) -> Result<RoundingOutcome> {
    if states.is_empty() {
        return Err(Error::InvalidParameter("empty state list".into()));
    }
    if samples_per_state == 0 {
        return Err(Error::InvalidParameter(
            "samples_per_state must be at least 1".into(),
        ));
    }
    let dim = q.dim();
    let couplings = Couplings::new(q);
    let mut best: Option<(f64, Vec<u8>)> = None;
    let mut pre_descent = Vec::with_capacity(states.len() * samples_per_state);
    let mut post_descent = Vec::with_capacity(states.len() * samples_per_state);

    for (si, state) in states.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(SAMPLE_STREAM_BASE + si as u64);

        // Cumulative distribution for exact states, reused per sample.
        let cdf: Option<Vec<f64>> = match state {
            WaveState::Exact(amps) => {
                if amps.len() != 1usize << dim {
                    return Err(Error::DimensionMismatch {
                        got: amps.len(),
                        dim: 1usize << dim,
                    });
                }
                let mut acc = 0.0;
                Some(
                    amps.iter()
                        .map(|a| {
                            acc += a.norm_sqr();
                            acc
                        })
                        .collect(),
                )
            }
            WaveState::MeanField(psi) => {
                if psi.len() != dim {
                    return Err(Error::DimensionMismatch {
                        got: psi.len(),
                        dim,
                    });
                }
                None
            }
        };

        for _ in 0..samples_per_state {
            let mut x = vec![0u8; dim];
            match state {
                WaveState::Exact(_) => {
                    let cdf = cdf.as_ref().expect("built above");
                    let total = *cdf.last().expect("non-empty state");
                    let u = rng.random::<f64>() * total;
                    let z = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi = (z >> i & 1) as u8;
                    }
                }
                WaveState::MeanField(psi) => {
                    for (i, xi) in x.iter_mut().enumerate() {
                        let p1 = psi[i][1].norm_sqr();
                        *xi = u8::from(rng.random::<f64>() < p1);
                    }
                }
            }
            pre_descent.push(q.energy(&x).expect("sampled x is binary"));
            let e = greedy_descent(&couplings, q, &mut x);
            post_descent.push(e);
            match &best {
                Some((be, _)) if *be <= e => {}
                _ => best = Some((e, x)),
            }
        }
    }

    let (energy, x) = best.expect("at least one sample");
    Ok(RoundingOutcome {
        x,
        energy,
        pre_descent,
        post_descent,
    })
}
