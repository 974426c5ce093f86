#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specmatch_core::{Matrix, Permutation, SymMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with i.i.d. uniform entries on `[-1, 1]`.
pub fn random_sym(n: usize, rng: &mut impl Rng) -> SymMatrix {
    SymMatrix::from_upper(n, |_, _| rng.random_range(-1.0..1.0)).unwrap()
}

/// Symmetric matrix with entries of variance roughly `1/n`.
pub fn random_wigner(n: usize, rng: &mut impl Rng) -> SymMatrix {
    let s = (3.0 / n as f64).sqrt();
    SymMatrix::from_upper(n, |_, _| rng.random_range(-s..s)).unwrap()
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> Matrix {
    Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Permutation {
    Permutation::random(n, rng)
}

/// Naive reference product.
pub fn naive_mul(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum()
    })
}
