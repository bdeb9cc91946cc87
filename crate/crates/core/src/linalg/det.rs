use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Matrix, Rational};
use crate::error::{Error, Result};

/// Exact determinant.
///
/// Rows are first cleared of denominators, then the integer matrix is
/// reduced by fraction-free (Bareiss) elimination so every intermediate is
/// itself a minor of the input.
pub fn det(m: &Matrix) -> Rational {
    let (mut ints, scales) = m.row_scaled_integers();
    let d = bareiss_in_place(&mut ints, m.dim());
    let scale: BigInt = scales.iter().product();
    Rational::new(d, scale)
}

/// Fraction-free elimination on a row-major `n x n` integer buffer.
pub(crate) fn bareiss_in_place(a: &mut [BigInt], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = a[k * n + k].clone();
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Solves `m x = b` exactly by Gaussian elimination with row pivoting.
pub fn solve(m: &Matrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = m.dim();
    if b.len() != n {
        return Err(Error::Shape {
            expected: n,
            got: b.len(),
        });
    }
    let w = n + 1;
    let mut a: Vec<Rational> = Vec::with_capacity(n * w);
    for i in 0..n {
        a.extend_from_slice(m.row(i));
        a.push(b[i].clone());
    }
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i * w + k].is_zero()).ok_or(Error::Singular)?;
        if p != k {
            for j in 0..w {
                a.swap(k * w + j, p * w + j);
            }
        }
        let pivot = a[k * w + k].clone();
        for i in k + 1..n {
            if a[i * w + k].is_zero() {
                continue;
            }
            let f = &a[i * w + k] / &pivot;
            for j in k..w {
                let t = &f * &a[k * w + j];
                a[i * w + j] -= t;
            }
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i * w + n].clone();
        for j in i + 1..n {
            acc -= &a[i * w + j] * &x[j];
        }
        x[i] = acc / &a[i * w + i];
    }
    Ok(x)
}
