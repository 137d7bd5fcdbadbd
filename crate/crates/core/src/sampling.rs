//! Random states and matrices for property checks and validation suites.

use rand::{Rng, RngExt};
use rand_distr::StandardNormal;

use crate::linalg::{inner, ComplexMatrix, C64};
use crate::state::QuantumState;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))
}

/// Haar-random unit vector.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = crate::linalg::norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, qubits: usize) -> QuantumState {
    QuantumState::Pure(random_ket(rng, 1 << qubits))
}

/// Haar-random unitary by Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &columns {
            let overlap = inner(u, &v);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= overlap * y;
            }
        }
        let n = crate::linalg::norm(&v);
        if n > 1e-8 {
            columns.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| columns[j][i])
}

/// Random density matrix `G G^dagger / Tr` with `G` a Ginibre matrix of random
/// rank between 1 and `dim`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, qubits: usize) -> QuantumState {
    let dim = 1 << qubits;
    let rank = rng.random_range(1..=dim);
    let g = ComplexMatrix::from_fn(dim, |_, j| if j < rank { gaussian(rng) } else { C64::from(0.0) });
    let rho = &g * &g.adjoint();
    let t = rho.trace().re;
    QuantumState::Density((rho * (1.0 / t)).hermitian_part())
}

/// Convex mixture of `terms` Haar-random pure states with random weights.
pub fn random_mixture<R: Rng + ?Sized>(rng: &mut R, qubits: usize, terms: usize) -> QuantumState {
    let dim = 1 << qubits;
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = ComplexMatrix::zeros(dim);
    for w in weights {
        let ket = random_ket(rng, dim);
        rho += &ComplexMatrix::projector(&ket).scale(C64::from(w / total));
    }
    QuantumState::Density(rho.hermitian_part())
}

/// Either a pure or a mixed random state with equal probability.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, qubits: usize) -> QuantumState {
    if rng.random_bool(0.5) {
        random_pure_state(rng, qubits)
    } else {
        random_density(rng, qubits)
    }
}

/// `rho_A ⊗ rho_B` with each factor independently pure or mixed.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> QuantumState {
    let a = random_state(rng, 1);
    let b = random_state(rng, 1);
    QuantumState::product(&a, &b).expect("single-qubit factors")
}
