use num_complex::Complex;
use num_traits::{One, Zero};

use super::{Matrix, Rational};

/// Exact complex rational, used for `det(A ± iD)`.
pub type ComplexRational = Complex<Rational>;

/// Sign of the imaginary diagonal in `A ± iD`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ImagSign {
    Plus,
    Minus,
}

impl ImagSign {
    pub fn apply(self, v: &Rational) -> Rational {
        match self {
            ImagSign::Plus => v.clone(),
            ImagSign::Minus => -v,
        }
    }
}

/// Exact `det(M + sign * i * diag(d))` by Gaussian elimination over the
/// complex rationals.
pub fn complex_det(m: &Matrix, d: &[Rational], sign: ImagSign) -> ComplexRational {
    let n = m.dim();
    assert_eq!(d.len(), n, "diagonal length must match the matrix dimension");
    let mut a: Vec<ComplexRational> = m
        .entries()
        .iter()
        .map(|v| Complex::new(v.clone(), Rational::zero()))
        .collect();
    for i in 0..n {
        a[i * n + i].im = sign.apply(&d[i]);
    }
    let mut acc = ComplexRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i * n + k].is_zero()) else {
            return ComplexRational::zero();
        };
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            acc = -acc;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            let f = &a[i * n + k] / &pivot;
            for j in k..n {
                let t = &f * &a[k * n + j];
                a[i * n + j] = &a[i * n + j] - t;
            }
        }
        acc *= pivot;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det, rat};

    #[test]
    fn imaginary_identity() {
        let z = complex_det(&Matrix::zeros(2), &[rat(1), rat(1)], ImagSign::Plus);
        assert_eq!(z, Complex::new(rat(-1), rat(0)));
    }

    #[test]
    fn scalar() {
        let m = Matrix::from_i64(&[[-4]]);
        assert_eq!(complex_det(&m, &[rat(3)], ImagSign::Plus), Complex::new(rat(-4), rat(3)));
        assert_eq!(complex_det(&m, &[rat(3)], ImagSign::Minus), Complex::new(rat(-4), rat(-3)));
    }

    #[test]
    fn zero_diagonal_is_plain_det() {
        let m = Matrix::from_i64(&[[0, 2, 1], [3, 0, -1], [1, 1, 0]]);
        let z = complex_det(&m, &[rat(0), rat(0), rat(0)], ImagSign::Plus);
        assert_eq!(z, Complex::new(det(&m), rat(0)));
    }

    #[test]
    fn conjugate_symmetry() {
        let m = Matrix::from_i64(&[[-6, -5, 1], [-1, -2, -5], [-5, 3, -1]]);
        let d = [rat(1), rat(2), rat(3)];
        let plus = complex_det(&m, &d, ImagSign::Plus);
        let minus = complex_det(&m, &d, ImagSign::Minus);
        assert_eq!(plus.conj(), minus);
    }
}
