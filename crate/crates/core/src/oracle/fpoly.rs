//! The bilinear form
//! `F(d) = Re det(A|k + iD) · Re det(B + iD) + Im det(A|k + iD) · Im det(B + iD)`
//! with `B` the Schur complement of `a_kk`. Minors of `B` are read as
//! `A(T ∪ {k}) / a_kk`, so `B` is never formed.

use num_traits::Zero;

use super::expansion::minor_sum;
use super::MultiPoly;
use crate::error::{Error, Result};
use crate::linalg::{IndexSet, MinorTable, Rational};

/// Largest dimension accepted by [`expand_f`].
pub const EXPAND_MAX_DIM: usize = 7;

fn pivot_checked(table: &MinorTable, k: usize) -> Result<(IndexSet, Rational)> {
    let n = table.dim();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let a_kk = table.get(IndexSet::singleton(k)).clone();
    if a_kk.is_zero() {
        return Err(Error::ZeroPivot { pivot: k });
    }
    Ok((IndexSet::full(n).without(k), a_kk))
}

/// Evaluates `F` at `d`, one entry per index other than `k`, in increasing
/// index order.
pub fn eval_f(table: &MinorTable, k: usize, d: &[Rational]) -> Result<Rational> {
    let (rest, a_kk) = pivot_checked(table, k)?;
    if d.len() != rest.len() {
        return Err(Error::Shape {
            expected: rest.len(),
            got: d.len(),
        });
    }
    let pivot = IndexSet::singleton(k);
    let d_of = |i: usize| d[rest.rank_of(i).expect("index in rest")].clone();
    let sub = |s: IndexSet| table.get(s).clone();
    let schur = |s: IndexSet| table.get(s.union(pivot)) / &a_kk;
    let re = minor_sum(rest, false, d_of, sub) * minor_sum(rest, false, d_of, schur);
    let im = minor_sum(rest, true, d_of, sub) * minor_sum(rest, true, d_of, schur);
    Ok(re + im)
}

fn expansion_poly(rest: IndexSet, odd: bool, minor: impl Fn(IndexSet) -> Rational) -> MultiPoly {
    let m = rest.len();
    let mut p = MultiPoly::zero(m);
    for s in rest.subsets() {
        if (s.len() % 2 == 1) != odd {
            continue;
        }
        let mut exps = vec![0u8; m];
        for i in s.iter() {
            exps[rest.rank_of(i).expect("index in rest")] = 1;
        }
        let c = minor(rest.difference(s));
        p.add_term(exps, if (s.len() / 2) % 2 == 0 { c } else { -c });
    }
    p
}

/// Full symbolic expansion of `F` in the variables `d_i`, `i ≠ k`.
pub fn expand_f(table: &MinorTable, k: usize) -> Result<MultiPoly> {
    let n = table.dim();
    if n > EXPAND_MAX_DIM {
        return Err(Error::Guard {
            what: "F expansion",
            n,
            max: EXPAND_MAX_DIM,
        });
    }
    let (rest, a_kk) = pivot_checked(table, k)?;
    let pivot = IndexSet::singleton(k);
    let sub = |s: IndexSet| table.get(s).clone();
    let schur = |s: IndexSet| table.get(s.union(pivot)) / &a_kk;
    let re = expansion_poly(rest, false, sub).mul(&expansion_poly(rest, false, schur));
    let im = expansion_poly(rest, true, sub).mul(&expansion_poly(rest, true, schur));
    Ok(re.add(&im))
}

/// Exponent vector of the monomial whose coefficient is the inequality
/// value for `(α, β)` at pivot `k`: `2` off `α`, `1` on `α \ β`, `0` on `β`.
pub fn monomial_for(n: usize, k: usize, alpha: IndexSet, beta: IndexSet) -> Vec<u8> {
    IndexSet::full(n)
        .without(k)
        .iter()
        .map(|i| {
            if beta.contains(i) {
                0
            } else if alpha.contains(i) {
                1
            } else {
                2
            }
        })
        .collect()
}
