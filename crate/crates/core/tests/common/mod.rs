#![allow(dead_code)]

use dstab_core::{Matrix, Rational};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.random_range(-9..=9);
    let den: i64 = rng.random_range(1..=4);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.random_range(1..=20);
    let den: i64 = rng.random_range(1..=7);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let rows = (0..n).map(|_| (0..n).map(|_| small_rational(rng)).collect()).collect();
    Matrix::from_rows(rows).unwrap()
}

pub fn random_diag(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| positive_rational(rng)).collect()
}

/// Random matrix with integer entries in `[-r, r]` and a negative diagonal.
pub fn random_negative_diagonal(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Matrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { -rng.random_range(1..=r) } else { rng.random_range(-r..=r) })
                .collect()
        })
        .collect();
    Matrix::from_i64(&rows)
}
