use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{Matrix, Rational};

/// Coefficients of `f(λ) = det(A - λI)`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoly {
    #[serde(with = "crate::linalg::serde_rational::vec")]
    coefficients: Vec<Rational>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `c[i]` multiplies `λ^i`; `c[n] = (-1)^n`, `c[0] = det A`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * lambda + c)
    }

    /// Coefficients `[1, a_1, .., a_n]` of the monic `det(λI - A)`, highest
    /// degree first, the form consumed by the Hurwitz test.
    pub fn monic_descending(&self) -> Vec<Rational> {
        let n = self.degree();
        let flip = n % 2 == 1;
        self.coefficients
            .iter()
            .rev()
            .map(|c| if flip { -c } else { c.clone() })
            .collect()
    }
}

/// Characteristic polynomial by the Faddeev–LeVerrier recurrence, exact.
pub fn char_poly(m: &Matrix) -> CharPoly {
    let n = m.dim();
    // b[i] is the coefficient of λ^i in det(λI - A)
    let mut b = vec![Rational::zero(); n + 1];
    b[n] = Rational::one();
    let mut acc = Matrix::zeros(n);
    for k in 1..=n {
        // acc <- A * acc + b[n-k+1] I
        let mut next = m.matmul(&acc);
        for i in 0..n {
            let v = next.get(i, i) + &b[n - k + 1];
            next.set(i, i, v);
        }
        let am = m.matmul(&next);
        let trace: Rational = (0..n).map(|i| am.get(i, i).clone()).sum();
        b[n - k] = -trace / Rational::from_integer(k.into());
        acc = next;
    }
    let coefficients = if n.is_multiple_of(2) {
        b
    } else {
        b.into_iter().map(|c| -c).collect()
    };
    CharPoly { coefficients }
}
