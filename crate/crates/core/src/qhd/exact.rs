//! Full-state evolution on the binary grid.
//!
//! The discretized Hamiltonian is `H(t) = kin(t) * (-1/2 L) + pot(t) * F`
//! where L is the tensor sum of per-variable two-point Laplacian stencils
//! [[-1, 1], [1, -1]] and F is diagonal with the QUBO energy of every
//! bitstring. One step applies Strang splitting: a kinetic half step, a
//! full potential phase, and another kinetic half step, all as 2x2 matrix
//! or elementwise multiplications.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qubo::QuboProblem;

use super::schedule::QhdSchedule;
use super::WaveState;

/// Largest exact-backend dimension (state size 2^14).
pub const EXACT_DIM_CAP: usize = 14;

/// 2x2 propagator exp(-i tau * (-1/2 L2)) for the single-variable stencil
/// L2 = [[-1, 1], [1, -1]]: equal to e^{-i tau/2} (cos(tau/2) I + i sin(tau/2) X).
#[inline]
pub(super) fn kinetic_propagator(tau: f64) -> (Complex64, Complex64) {
    let half = 0.5 * tau;
    let phase = Complex64::from_polar(1.0, -half);
    let diag = phase * half.cos();
    let off = phase * Complex64::new(0.0, half.sin());
    (diag, off)
}

fn apply_kinetic(psi: &mut [Complex64], dim: usize, tau: f64) {
    if tau == 0.0 {
        return;
    }
    let (diag, off) = kinetic_propagator(tau);
    for axis in 0..dim {
        let stride = 1usize << axis;
        let mut base = 0usize;
        while base < psi.len() {
            for offset in base..base + stride {
                let a = psi[offset];
                let b = psi[offset + stride];
                psi[offset] = diag * a + off * b;
                psi[offset + stride] = off * a + diag * b;
            }
            base += stride << 1;
        }
    }
}

/// Integrate the Schrödinger evolution from the uniform superposition and
/// return the final state. The evolution is unitary step by step, so the
/// norm stays within rounding error of 1.
pub fn evolve_exact(q: &QuboProblem, sched: &QhdSchedule) -> Result<WaveState> {
    let dim = q.dim();
    if dim == 0 {
        return Err(Error::InvalidParameter("empty problem".into()));
    }
    if dim > EXACT_DIM_CAP {
        return Err(Error::ExactDimCapExceeded {
            dim,
            cap: EXACT_DIM_CAP,
        });
    }
    sched.validate()?;

    let size = 1usize << dim;
    let energies: Vec<f64> = (0..size as u64).map(|z| q.energy_bits(z)).collect();

    let amp = (size as f64).sqrt().recip();
    let mut psi = vec![Complex64::new(amp, 0.0); size];

    let dt = sched.dt();
    for step in 0..sched.steps {
        let t_mid = (step as f64 + 0.5) * dt;
        let tau = 0.5 * dt * sched.kinetic_coeff(t_mid);
        let theta = dt * sched.potential_coeff(t_mid);
        apply_kinetic(&mut psi, dim, tau);
        for (z, amp) in psi.iter_mut().enumerate() {
            *amp *= Complex64::from_polar(1.0, -theta * energies[z]);
        }
        apply_kinetic(&mut psi, dim, tau);
    }

    Ok(WaveState::Exact(psi))
}
