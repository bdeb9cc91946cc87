//! Closed-form versions of the inequality family for `n = 3` and `n = 4`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det, principal_minor, IndexSet, Matrix, Rational};
use crate::stability::{classify_p, hurwitz_stable};

/// The three `3 x 3` conditions, one per pivot `k = 3, 2, 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposition1 {
    /// `values[0]` uses pivot 3, `values[1]` pivot 2, `values[2]` pivot 1.
    pub values: [Rational; 3],
    pub holds: bool,
}

fn minor(m: &Matrix, idx: &[usize]) -> Rational {
    principal_minor(m, IndexSet::from_indices(idx.iter().copied())).expect("indices in range")
}

/// Evaluates the three `3 x 3` conditions for a stable `A` with `-A` a
/// P-matrix. `holds` is true when at least one is nonnegative.
pub fn proposition1_n3(m: &Matrix) -> Result<Proposition1> {
    if m.dim() != 3 {
        return Err(Error::Shape {
            expected: 3,
            got: m.dim(),
        });
    }
    if !classify_p(&m.neg())?.is_p {
        return Err(Error::Precondition("-A must be a P-matrix".into()));
    }
    if !hurwitz_stable(m).stable {
        return Err(Error::Precondition("A must be Hurwitz stable".into()));
    }
    let a = |i: usize| m.get(i, i).clone();
    let (a12, a13, a23) = (minor(m, &[0, 1]), minor(m, &[0, 2]), minor(m, &[1, 2]));
    let d = det(m);
    let condn3 = -a12.clone() + &a(0) / a(2) * &a23 + &a(1) / a(2) * &a13 - &d / a(2);
    let condn4 = -a13.clone() + &a(0) / a(1) * &a23 + &a(2) / a(1) * &a12 - &d / a(1);
    let condn5 = -a23 + &a(1) / a(0) * &a13 + &a(2) / a(0) * &a12 - &d / a(0);
    let values = [condn3, condn4, condn5];
    let holds = values.iter().any(|v| !v.is_negative());
    Ok(Proposition1 { values, holds })
}

/// Pairwise form for `1 ≤ i < j ≤ 3`, satisfied when `value ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoIndexForm {
    pub i: usize,
    pub j: usize,
    pub value: Rational,
    pub satisfied: bool,
}

/// Single-index form for `i = 1, 2, 3`, multiplied through by `a_44`;
/// satisfied when `value ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneIndexForm {
    pub i: usize,
    pub value: Rational,
    pub satisfied: bool,
}

/// The six reduced `4 x 4` inequalities at pivot 4 (indices 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedForms {
    pub two: Vec<TwoIndexForm>,
    pub one: Vec<OneIndexForm>,
}

impl ReducedForms {
    pub fn all_satisfied(&self) -> bool {
        self.two.iter().all(|f| f.satisfied) && self.one.iter().all(|f| f.satisfied)
    }
}

/// Reduced forms of the pivot-4 inequalities for a `4 x 4` matrix with
/// `a_44 < 0`.
pub fn reduced_forms_n4(m: &Matrix) -> Result<ReducedForms> {
    if m.dim() != 4 {
        return Err(Error::Shape {
            expected: 4,
            got: m.dim(),
        });
    }
    let a44 = m.get(3, 3).clone();
    if a44.is_zero() {
        return Err(Error::ZeroPivot { pivot: 3 });
    }
    if a44.is_positive() {
        return Err(Error::Precondition("reduced forms need a_44 < 0".into()));
    }
    let a = |i: usize| m.get(i, i).clone();
    let mut two = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let value = a(i) / &a44 * minor(m, &[j, 3]) + a(j) / &a44 * minor(m, &[i, 3])
            - minor(m, &[i, j])
            - minor(m, &[i, j, 3]) / &a44;
        two.push(TwoIndexForm {
            i,
            j,
            satisfied: !value.is_negative(),
            value,
        });
    }
    let a123 = minor(m, &[0, 1, 2]);
    let d = det(m);
    let mut one = Vec::new();
    for i in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let (j, k) = (others[0], others[1]);
        let value = -(&a123 * minor(m, &[i, 3])) + minor(m, &[j, i]) * minor(m, &[k, i, 3])
            + minor(m, &[k, i]) * minor(m, &[j, i, 3])
            - a(i) * &d;
        one.push(OneIndexForm {
            i,
            satisfied: !value.is_positive(),
            value,
        });
    }
    Ok(ReducedForms { two, one })
}
