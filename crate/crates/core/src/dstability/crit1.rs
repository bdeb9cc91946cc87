use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{chi_exponent, enumerate_pairs, one_based};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{IndexSet, MinorTable, Rational};

/// One evaluated inequality of the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crit1Instance {
    #[serde(with = "one_based")]
    pub pivot: usize,
    /// Dimension of the (sub)matrix the inequality belongs to.
    pub dim: usize,
    pub alpha: IndexSet,
    pub beta: IndexSet,
    pub chi: usize,
    #[serde(with = "crate::linalg::serde_rational")]
    pub value: Rational,
    pub satisfied: bool,
}

/// Evaluates the inequality for `(α, β)` at pivot `k` of the principal
/// submatrix on `subset`, reading every minor from `table`.
pub fn crit1_on(
    table: &MinorTable,
    subset: IndexSet,
    k: usize,
    alpha: IndexSet,
    beta: IndexSet,
) -> Result<Crit1Instance> {
    if !subset.contains(k) {
        return Err(Error::IndexOutOfRange {
            index: k,
            n: table.dim(),
        });
    }
    if !alpha.is_subset(subset.without(k)) || !beta.is_subset(alpha) {
        return Err(Error::Precondition(format!(
            "need beta {beta} ⊆ alpha {alpha} ⊆ {} without pivot {}",
            subset,
            k + 1
        )));
    }
    let dim = subset.len();
    let chi = chi_exponent(dim, alpha.len(), beta.len())?;
    let pivot_set = IndexSet::singleton(k);
    let a_kk = table.get(pivot_set);
    if a_kk.is_zero() {
        return Err(Error::ZeroPivot { pivot: k });
    }
    let mut acc = Rational::zero();
    for gamma in alpha.difference(beta).subsets() {
        let term = table.get(alpha.difference(gamma)) * table.get(beta.union(gamma).union(pivot_set));
        if (chi + gamma.len()) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let value = acc / a_kk;
    Ok(Crit1Instance {
        pivot: k,
        dim,
        alpha,
        beta,
        chi,
        satisfied: !value.is_negative(),
        value,
    })
}

/// [`crit1_on`] for the whole matrix.
pub fn crit1_value(table: &MinorTable, k: usize, alpha: IndexSet, beta: IndexSet) -> Result<Crit1Instance> {
    crit1_on(table, IndexSet::full(table.dim()), k, alpha, beta)
}

/// Every inequality for one pivot of one (sub)matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Outcome {
    pub subset: IndexSet,
    #[serde(with = "one_based")]
    pub pivot: usize,
    pub instances: Vec<Crit1Instance>,
    pub passed: bool,
}

impl Theorem1Outcome {
    pub fn first_violation(&self) -> Option<&Crit1Instance> {
        self.instances.iter().find(|i| !i.satisfied)
    }
}

/// Evaluates all inequalities for pivot `k` of the submatrix on `subset`.
/// A zero pivot makes the test inapplicable and is an error, distinct from
/// a violated inequality.
pub fn theorem1_on(table: &MinorTable, subset: IndexSet, k: usize, exec: Exec) -> Result<Theorem1Outcome> {
    if !subset.contains(k) {
        return Err(Error::IndexOutOfRange {
            index: k,
            n: table.dim(),
        });
    }
    if table.get(IndexSet::singleton(k)).is_zero() {
        return Err(Error::ZeroPivot { pivot: k });
    }
    let pairs = enumerate_pairs(subset.without(k));
    let instances = exec
        .map(&pairs, |&(a, b)| crit1_on(table, subset, k, a, b))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let passed = instances.iter().all(|i| i.satisfied);
    Ok(Theorem1Outcome {
        subset,
        pivot: k,
        instances,
        passed,
    })
}

/// [`theorem1_on`] for the whole matrix with the default executor.
pub fn theorem1_test(table: &MinorTable, k: usize) -> Result<Theorem1Outcome> {
    theorem1_on(table, IndexSet::full(table.dim()), k, Exec::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{minor_table, rat, ratio, Matrix};

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::from_indices(v.iter().map(|i| i - 1))
    }

    fn ex1() -> MinorTable {
        minor_table(&Matrix::from_i64(&[[-6, -5, 1], [-1, -2, -5], [-5, 3, -1]])).unwrap()
    }

    fn ex2(q: Rational) -> MinorTable {
        minor_table(
            &Matrix::from_rows(vec![
                vec![rat(-1), rat(0), q],
                vec![rat(-1), rat(-1), rat(0)],
                vec![rat(-1), rat(-1), rat(-1)],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    fn ex3(p: Rational, q: Rational) -> MinorTable {
        minor_table(
            &Matrix::from_rows(vec![
                vec![rat(-1), rat(0), q, p],
                vec![rat(-1), rat(-1), rat(0), rat(0)],
                vec![rat(-1), rat(-1), rat(-1), rat(0)],
                vec![rat(-1), rat(-1), rat(-1), rat(-1)],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn example_one_condition_value() {
        let inst = crit1_value(&ex1(), 2, set(&[1, 2]), IndexSet::EMPTY).unwrap();
        assert_eq!(inst.value, rat(-118));
        assert_eq!(inst.chi, 1);
        assert!(!inst.satisfied);
    }

    #[test]
    fn example_two_value_is_q() {
        for q in [rat(-2), ratio(-1, 2), rat(0), rat(3)] {
            let inst = crit1_value(&ex2(q.clone()), 2, set(&[1, 2]), IndexSet::EMPTY).unwrap();
            assert_eq!(inst.value, q);
        }
    }

    #[test]
    fn example_three_scaled_by_pivot() {
        let q = rat(3);
        let t = ex3(rat(1), q.clone());
        let inst = crit1_value(&t, 3, set(&[1, 2, 3]), set(&[3])).unwrap();
        // a_44 = -1 times the value is the reduced form -2q
        assert_eq!(&inst.value * rat(-1), rat(-2) * &q);
        assert!(inst.satisfied);
    }

    #[test]
    fn example_three_all_thirteen_hold_on_ray() {
        let q = rat(1);
        let out = theorem1_test(&ex3(rat(2) * &q, q), 3).unwrap();
        assert_eq!(out.instances.len(), 13);
        assert!(out.passed);
        assert_eq!(out.first_violation(), None);
    }

    #[test]
    fn example_one_fails_at_third_pivot() {
        let out = theorem1_test(&ex1(), 2).unwrap();
        assert!(!out.passed);
        let v = out.first_violation().unwrap();
        assert_eq!((v.alpha, v.beta), (set(&[1, 2]), IndexSet::EMPTY));
        assert_eq!(v.value, rat(-118));
    }

    #[test]
    fn example_two_second_pivot_branch() {
        let out = theorem1_test(&ex2(ratio(-1, 2)), 1).unwrap();
        assert!(out.passed);
    }

    #[test]
    fn zero_pivot_is_inapplicable() {
        let t = minor_table(&Matrix::from_i64(&[[-1, 1, 0], [1, 0, 1], [0, 2, -1]])).unwrap();
        assert_eq!(theorem1_test(&t, 1), Err(Error::ZeroPivot { pivot: 1 }));
        assert_eq!(
            crit1_value(&t, 1, set(&[1]), set(&[1])),
            Err(Error::ZeroPivot { pivot: 1 })
        );
    }

    #[test]
    fn malformed_pairs() {
        let t = ex1();
        assert!(crit1_value(&t, 2, set(&[1, 2]), set(&[1])).is_err());
        assert!(crit1_value(&t, 2, set(&[1, 3]), set(&[1])).is_err());
        assert!(crit1_value(&t, 2, set(&[1]), set(&[2])).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let t = ex3(rat(5), rat(-1));
        let full = IndexSet::full(4);
        assert_eq!(
            theorem1_on(&t, full, 0, Exec::Sequential).unwrap(),
            theorem1_on(&t, full, 0, Exec::Parallel).unwrap()
        );
    }
}
