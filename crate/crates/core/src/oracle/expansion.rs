use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{complex_det, schur_complement, ComplexRational, ImagSign, IndexSet, Matrix, MinorTable, Rational};

fn check_len(d: &[Rational], n: usize) -> Result<()> {
    if d.len() != n {
        return Err(Error::Shape {
            expected: n,
            got: d.len(),
        });
    }
    Ok(())
}

/// `Σ_S sign(|S|) · C(R \ S) · Π_{i∈S} d_i` over subsets `S` of `ground`
/// with `|S|` of the given parity, where `sign` alternates every two steps.
pub(crate) fn minor_sum(
    ground: IndexSet,
    odd: bool,
    d_of: impl Fn(usize) -> Rational,
    minor: impl Fn(IndexSet) -> Rational,
) -> Rational {
    let mut acc = Rational::zero();
    for s in ground.subsets() {
        if (s.len() % 2 == 1) != odd {
            continue;
        }
        let mut term = minor(ground.difference(s));
        for i in s.iter() {
            term *= d_of(i);
        }
        if (s.len() / 2) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `Re det(A + iD)` as a signed sum of products of principal minors and
/// entries of `d`.
pub fn re_det_expansion(table: &MinorTable, d: &[Rational]) -> Result<Rational> {
    let n = table.dim();
    check_len(d, n)?;
    Ok(minor_sum(IndexSet::full(n), false, |i| d[i].clone(), |s| table.get(s).clone()))
}

/// `Im det(A + iD)`, the odd-order counterpart of [`re_det_expansion`].
pub fn im_det_expansion(table: &MinorTable, d: &[Rational]) -> Result<Rational> {
    let n = table.dim();
    check_len(d, n)?;
    Ok(minor_sum(IndexSet::full(n), true, |i| d[i].clone(), |s| table.get(s).clone()))
}

fn times_i(z: ComplexRational, sign: ImagSign) -> ComplexRational {
    match sign {
        ImagSign::Plus => Complex::new(-z.im, z.re),
        ImagSign::Minus => Complex::new(z.im, -z.re),
    }
}

/// Checks `det(A ± iD) = ±i d_n det(A|n ± iD|n) + a_nn det(B ± iD|n)` for
/// both signs, where `A|n` deletes the last row and column and `B` is the
/// Schur complement of `a_nn`.
pub fn expan_identity_check(m: &Matrix, d: &[Rational]) -> Result<bool> {
    let n = m.dim();
    check_len(d, n)?;
    if n < 2 {
        return Err(Error::Precondition("identity needs n >= 2".into()));
    }
    let a_nn = m.get(n - 1, n - 1).clone();
    if a_nn.is_zero() {
        return Err(Error::ZeroPivot { pivot: n - 1 });
    }
    let head = m.delete(n - 1);
    let d_head = &d[..n - 1];
    if complex_det(&head, d_head, ImagSign::Plus).is_zero() {
        return Err(Error::Precondition("det(A|n + iD|n) vanishes".into()));
    }
    let schur = schur_complement(m, n - 1)?;
    let scale = Complex::new(a_nn, Rational::zero());
    let d_n = Complex::new(d[n - 1].clone(), Rational::zero());
    for sign in [ImagSign::Plus, ImagSign::Minus] {
        let lhs = complex_det(m, d, sign);
        let rhs = times_i(&d_n * complex_det(&head, d_head, sign), sign) + &scale * complex_det(&schur, d_head, sign);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{minor_table, rat};

    fn ex1() -> Matrix {
        Matrix::from_i64(&[[-6, -5, 1], [-1, -2, -5], [-5, 3, -1]])
    }

    #[test]
    fn small_cases() {
        let t = minor_table(&Matrix::zeros(2)).unwrap();
        assert_eq!(re_det_expansion(&t, &[rat(1), rat(1)]).unwrap(), rat(-1));
        assert_eq!(im_det_expansion(&t, &[rat(1), rat(1)]).unwrap(), rat(0));
        let t = minor_table(&Matrix::from_i64(&[[7]])).unwrap();
        assert_eq!(re_det_expansion(&t, &[rat(3)]).unwrap(), rat(7));
        assert_eq!(im_det_expansion(&t, &[rat(3)]).unwrap(), rat(3));
    }

    #[test]
    fn example_one_against_complex_det() {
        let m = ex1();
        let t = minor_table(&m).unwrap();
        let d = [rat(1), rat(2), rat(3)];
        let z = complex_det(&m, &d, ImagSign::Plus);
        assert_eq!(re_det_expansion(&t, &d).unwrap(), z.re);
        assert_eq!(im_det_expansion(&t, &d).unwrap(), z.im);
        assert!(re_det_expansion(&t, &d[..2]).is_err());
    }

    #[test]
    fn identity_cases() {
        assert!(expan_identity_check(&ex1(), &[rat(1), rat(1), rat(1)]).unwrap());
        assert!(expan_identity_check(&Matrix::from_i64(&[[-1, 0], [0, -2]]), &[rat(1), rat(1)]).unwrap());
    }

    #[test]
    fn identity_preconditions() {
        let zero_pivot = Matrix::from_i64(&[[-1, 1], [1, 0]]);
        assert_eq!(
            expan_identity_check(&zero_pivot, &[rat(1), rat(1)]),
            Err(Error::ZeroPivot { pivot: 1 })
        );
        // A|n + iD|n = 0 when a_11 = 0 and d_1 = 0
        let m = Matrix::from_i64(&[[0, 1], [1, -1]]);
        assert!(matches!(
            expan_identity_check(&m, &[rat(0), rat(1)]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(expan_identity_check(&Matrix::from_i64(&[[1]]), &[rat(1)]), Err(Error::Precondition(_))));
    }
}
