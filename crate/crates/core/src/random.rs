//! Reproducible random states and Hamiltonians.
//!
//! Every randomized suite derives one generator per trial from a master
//! seed and the trial index (ChaCha stream selection), so trials can run in
//! any order or in parallel and still draw the same numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{jacobi_eig, ComplexMatrix, DensityMatrix, HermitianOperator, C64};
use crate::xstate::XStateParams;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform sample from the probability simplex of length `n`.
pub fn simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// `(A + A†)/2` with independent standard-normal real and imaginary parts.
pub fn hermitian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    ComplexMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// Eigenbasis of a random Hermitian matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    jacobi_eig(&hermitian_matrix(n, rng))
        .expect("Jacobi converges on random Hermitian matrices")
        .vectors
}

pub fn hamiltonian<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> HermitianOperator {
    let n = dims.iter().product();
    HermitianOperator::new(hermitian_matrix(n, rng), dims.to_vec()).unwrap()
}

/// `U diag(λ) U†` with `λ` uniform on the simplex.
pub fn density<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let lambda = simplex(n, rng);
    let u = unitary(n, rng);
    let m = u.sandwich(&ComplexMatrix::from_real_diagonal(&lambda));
    let herm = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    DensityMatrix::new(herm, dims.to_vec()).expect("random state is valid")
}

/// Random diagonal state with the given local dimensions.
pub fn diagonal_density<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    DensityMatrix::new(
        ComplexMatrix::from_real_diagonal(&simplex(n, rng)),
        dims.to_vec(),
    )
    .unwrap()
}

/// Random three-qubit X-state: simplex diagonal, coherences uniform in the
/// disc (or interval, when `real`) allowed by positivity.
pub fn x_state_params<R: Rng + ?Sized>(rng: &mut R, real: bool) -> XStateParams {
    let diag: [f64; 8] = simplex(8, rng).try_into().unwrap();
    let mut anti = [C64::new(0.0, 0.0); 4];
    for (i, z) in anti.iter_mut().enumerate() {
        let bound = (diag[i] * diag[7 - i]).sqrt();
        *z = if real {
            C64::new(bound * rng.random_range(-1.0..=1.0), 0.0)
        } else {
            let radius = bound * rng.random::<f64>().sqrt();
            C64::from_polar(radius, rng.random_range(0.0..std::f64::consts::TAU))
        };
    }
    XStateParams::new(diag, anti).expect("sampled inside the positivity bound")
}
