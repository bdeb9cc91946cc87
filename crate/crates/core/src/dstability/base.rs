use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{det, IndexSet, Matrix, MinorTable};
use crate::stability::hurwitz_stable;

/// D-stability of a `1 x 1` or `2 x 2` matrix.
///
/// `[a]` is D-stable iff `a < 0`. A `2 x 2` matrix is D-stable iff it is
/// stable, both diagonal entries are nonpositive and the determinant is
/// positive.
pub fn base_dstable(m: &Matrix) -> Result<bool> {
    match m.dim() {
        1 => Ok(m.get(0, 0).is_negative()),
        2 => Ok(hurwitz_stable(m).stable
            && !m.get(0, 0).is_positive()
            && !m.get(1, 1).is_positive()
            && det(m).is_positive()),
        n => Err(Error::Guard {
            what: "base case dimension",
            n,
            max: 2,
        }),
    }
}

/// Whether `det(C ± iD) ≠ 0` for every positive diagonal `D`, where `C` is
/// the principal submatrix on `subset` (one or two indices).
///
/// For `1 x 1` this always holds. For `2 x 2`,
/// `det(C + iD) = det C - d1 d2 + i (d1 c22 + d2 c11)`, which has a positive
/// zero exactly when `det C > 0` and `c11, c22` are of strictly opposite
/// sign or both zero.
pub fn base_nonvanishing(table: &MinorTable, subset: IndexSet) -> Result<bool> {
    let idx = subset.to_vec();
    match idx[..] {
        [_] => Ok(true),
        [i, j] => {
            let c11 = table.get(IndexSet::singleton(i));
            let c22 = table.get(IndexSet::singleton(j));
            let opposite = (c11.is_positive() && c22.is_negative())
                || (c11.is_negative() && c22.is_positive())
                || (c11.is_zero() && c22.is_zero());
            Ok(!(table.get(subset).is_positive() && opposite))
        }
        _ => Err(Error::Guard {
            what: "base case dimension",
            n: idx.len(),
            max: 2,
        }),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// The whole matrix is `1 x 1` or `2 x 2` and decided directly.
    DStable,
    /// Bottom of a recursion: `det(C ± iD)` never vanishes.
    NonVanishing,
    /// Caller asserted D-stability of this submatrix.
    Assumed,
}

impl std::fmt::Display for BaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BaseKind::DStable => "d_stable",
            BaseKind::NonVanishing => "non_vanishing",
            BaseKind::Assumed => "assumed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseEvidence {
    pub subset: IndexSet,
    pub kind: BaseKind,
    pub holds: bool,
}
