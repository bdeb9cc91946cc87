use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{minor_table, IndexSet, Matrix, MinorTable, Rational};

/// Membership of a matrix in the P, P₀ and P₀⁺ classes.
///
/// Witnesses are the first offending index set in order of increasing size,
/// then lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PClassReport {
    pub is_p: bool,
    pub is_p0: bool,
    pub is_p0_plus: bool,
    /// First principal minor that is not positive.
    pub p_witness: Option<IndexSet>,
    /// First principal minor that is negative.
    pub p0_witness: Option<IndexSet>,
    /// First order `k` whose minor sum is not positive.
    pub failing_order: Option<usize>,
    /// `order_sums[k]` is the sum of the order-`k` principal minors.
    #[serde(with = "crate::linalg::serde_rational::vec")]
    pub order_sums: Vec<Rational>,
}

impl PClassReport {
    pub fn from_table(table: &MinorTable) -> Self {
        Self::build(table.dim(), |s| table.get(s).clone())
    }

    /// Classifies `-A` from the minors of `A`, using
    /// `minor(-A, α) = (-1)^|α| minor(A, α)`.
    pub fn of_negation(table: &MinorTable) -> Self {
        Self::build(table.dim(), |s| {
            let v = table.get(s);
            if s.len() % 2 == 1 {
                -v
            } else {
                v.clone()
            }
        })
    }

    fn build(n: usize, minor: impl Fn(IndexSet) -> Rational) -> Self {
        let mut p_witness = None;
        let mut p0_witness = None;
        let mut order_sums = vec![Rational::zero(); n + 1];
        for k in 0..=n {
            for s in IndexSet::full(n).subsets_of_len(k) {
                let v = minor(s);
                if k > 0 {
                    if p_witness.is_none() && !v.is_positive() {
                        p_witness = Some(s);
                    }
                    if p0_witness.is_none() && v.is_negative() {
                        p0_witness = Some(s);
                    }
                }
                order_sums[k] += v;
            }
        }
        let failing_order = (1..=n).find(|&k| !order_sums[k].is_positive());
        let is_p0 = p0_witness.is_none();
        PClassReport {
            is_p: p_witness.is_none(),
            is_p0,
            is_p0_plus: is_p0 && failing_order.is_none(),
            p_witness,
            p0_witness,
            failing_order,
            order_sums,
        }
    }
}

pub fn classify_p(m: &Matrix) -> Result<PClassReport> {
    Ok(PClassReport::from_table(&minor_table(m)?))
}

/// Result of the necessary condition "−A is a P₀⁺-matrix".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryCheck {
    pub passed: bool,
    /// Classification of `-A`.
    pub report: PClassReport,
}

/// A D-stable matrix has `-A` in P₀⁺; failure is a definitive negative.
pub fn necessary_dstability(m: &Matrix) -> Result<NecessaryCheck> {
    let report = classify_p(&m.neg())?;
    Ok(NecessaryCheck {
        passed: report.is_p0_plus,
        report,
    })
}
