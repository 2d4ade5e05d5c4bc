//! Cross-checks between the baselines and the main solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qpart::oracle::{brute_force_qubo, simulated_annealing_qubo, SaParams};
use qpart::qhd::{solve_qubo, SolverParams};
use qpart::qubo::QuboProblem;

fn random_qubo(dim: usize, seed: u64) -> QuboProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut quad = Vec::new();
    for i in 0..dim as u32 {
        for j in i..dim as u32 {
            if rng.random::<f64>() < 0.5 {
                quad.push((i, j, 2.0 * rng.random::<f64>() - 1.0));
            }
        }
    }
    let linear: Vec<f64> = (0..dim).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
    QuboProblem::new(dim as u32, 1, quad, linear, 0.0).unwrap()
}

#[test]
fn brute_force_is_invariant_to_variable_permutation() {
    for seed in 0..10u64 {
        let dim = 8usize;
        let q = random_qubo(dim, 600 + seed);

        // Reverse the variable order.
        let perm = |i: u32| (dim as u32 - 1) - i;
        let quad: Vec<(u32, u32, f64)> = q
            .quadratic()
            .iter()
            .map(|&(i, j, v)| (perm(i).min(perm(j)), perm(i).max(perm(j)), v))
            .collect();
        let linear: Vec<f64> = (0..dim).map(|i| q.linear()[dim - 1 - i]).collect();
        let q2 = QuboProblem::new(dim as u32, 1, quad, linear, q.offset()).unwrap();

        let a = brute_force_qubo(&q).unwrap();
        let b = brute_force_qubo(&q2).unwrap();
        // Entry order changes the summation order, so allow rounding slack.
        let tol = 1e-12 * a.objective.abs().max(1.0);
        assert!(
            (a.objective - b.objective).abs() <= tol,
            "seed {seed}: {} vs {}",
            a.objective,
            b.objective
        );
        // The permuted winner is optimal under the original problem too.
        let unpermuted: Vec<u8> = (0..dim).map(|i| b.solution[dim - 1 - i]).collect();
        assert!((q.energy(&unpermuted).unwrap() - a.objective).abs() <= tol);
    }
}

#[test]
fn all_solvers_agree_on_the_energy_of_their_own_solutions() {
    for seed in 0..10u64 {
        let q = random_qubo(10, 700 + seed);
        let brute = brute_force_qubo(&q).unwrap();
        assert_eq!(q.energy(&brute.solution).unwrap(), brute.objective);

        let sa = simulated_annealing_qubo(
            &q,
            &SaParams {
                sweeps: 200,
                seed,
                ..SaParams::default()
            },
        )
        .unwrap();
        assert_eq!(q.energy(&sa.solution).unwrap(), sa.objective);

        let qhd = solve_qubo(
            &q,
            &SolverParams {
                seed,
                ..SolverParams::default()
            },
        )
        .unwrap();
        assert_eq!(q.energy(&qhd.x).unwrap(), qhd.energy);

        // The proven optimum lower-bounds everything.
        assert!(brute.objective <= sa.objective);
        assert!(brute.objective <= qhd.energy);
        assert!(brute.proven_optimal && !sa.proven_optimal);
    }
}
