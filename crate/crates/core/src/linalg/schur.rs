use num_traits::Zero;

use super::{det, solve, Matrix, Rational};
use crate::error::{Error, Result};

/// Schur complement of the diagonal entry `a_kk`.
///
/// The pivot is moved last by a symmetric permutation that keeps the other
/// indices in their original order, and the last-pivot formula
/// `A|_n - (1/a_nn) col * row` is applied. Entry `(i, j)` of the result is
/// `A(i k; j k) / a_kk` with `k` removed from the labels.
pub fn schur_complement(m: &Matrix, k: usize) -> Result<Matrix> {
    m.check_index(k)?;
    let n = m.dim();
    if m.diag(k).is_zero() {
        return Err(Error::ZeroPivot { pivot: k });
    }
    if n == 1 {
        return Err(Error::Precondition("Schur complement of a 1x1 matrix is empty".into()));
    }
    let perm: Vec<usize> = (0..n).filter(|&i| i != k).chain(std::iter::once(k)).collect();
    let p = m.permute(&perm);
    let last = n - 1;
    let pivot = p.get(last, last).clone();
    let mut entries = Vec::with_capacity(last * last);
    for i in 0..last {
        for j in 0..last {
            entries.push(p.get(i, j) - p.get(i, last) * p.get(last, j) / &pivot);
        }
    }
    Matrix::new(last, entries)
}

/// `det A = det(A|n) (a_nn - row (A|n)^{-1} col)`, valid when the leading
/// block is nonsingular.
pub fn det_via_leading_block(m: &Matrix) -> Result<Rational> {
    let n = m.dim();
    let last = n - 1;
    if n == 1 {
        return Ok(m.get(0, 0).clone());
    }
    let lead = m.delete(last);
    let lead_det = det(&lead);
    if lead_det.is_zero() {
        return Err(Error::Singular);
    }
    let col: Vec<Rational> = (0..last).map(|i| m.get(i, last).clone()).collect();
    let x = solve(&lead, &col)?;
    let correction: Rational = (0..last).map(|j| m.get(last, j) * &x[j]).sum();
    Ok(lead_det * (m.get(last, last) - correction))
}

/// `det A = a_nn det(A|_{a_nn})`, valid when `a_nn != 0`.
pub fn det_via_pivot(m: &Matrix) -> Result<Rational> {
    let n = m.dim();
    let a_nn = m.get(n - 1, n - 1);
    if n == 1 {
        return Ok(a_nn.clone());
    }
    let s = schur_complement(m, n - 1)?;
    Ok(a_nn * det(&s))
}
