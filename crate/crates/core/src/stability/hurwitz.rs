use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::char_poly;
use crate::linalg::{det, Matrix, Rational};

/// Outcome of the exact Routh–Hurwitz test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzVerdict {
    pub stable: bool,
    /// Some Hurwitz determinant vanished; the matrix is reported unstable.
    pub degenerate: bool,
    /// Leading principal minors `Δ_1 .. Δ_n` of the Hurwitz matrix of the
    /// monic `det(λI - A)`.
    #[serde(with = "crate::linalg::serde_rational::vec")]
    pub determinants: Vec<Rational>,
}

/// Decides whether every eigenvalue has negative real part, exactly.
pub fn hurwitz_stable(m: &Matrix) -> HurwitzVerdict {
    let coeffs = char_poly(m).monic_descending();
    let determinants = hurwitz_determinants(&coeffs);
    let degenerate = determinants.iter().any(|d| d.is_zero());
    let stable = determinants.iter().all(|d| d.is_positive());
    HurwitzVerdict {
        stable,
        degenerate,
        determinants,
    }
}

/// `coeffs = [a_0, .., a_n]` with `a_0 > 0`, highest degree first.
pub(crate) fn hurwitz_determinants(coeffs: &[Rational]) -> Vec<Rational> {
    let n = coeffs.len() - 1;
    let a = |k: isize| -> Rational {
        if k < 0 || k as usize > n {
            Rational::zero()
        } else {
            coeffs[k as usize].clone()
        }
    };
    // h_ij = a_{2j - i} with 1-based i, j
    let mut entries = Vec::with_capacity(n * n);
    for i in 1..=n as isize {
        for j in 1..=n as isize {
            entries.push(a(2 * j - i));
        }
    }
    let h = Matrix::new(n, entries).expect("square Hurwitz matrix");
    (1..=n)
        .map(|k| det(&h.principal_submatrix(crate::IndexSet::full(k))))
        .collect()
}
