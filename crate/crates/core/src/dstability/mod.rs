//! The determinantal sufficient test for D-stability.
//!
//! For a pivot `k` with `a_kk != 0`, every pair `β ⊆ α ⊆ [n] \ {k}` with
//! `|α| ≥ 1` and `|β| ≡ |α| (mod 2)` yields one inequality
//!
//! ```text
//! Σ_{γ ⊆ α\β} (-1)^(χ + |γ|) A(α\γ; α\γ) · A(β∪γ∪{k}; β∪γ∪{k}) / a_kk  ≥  0
//! ```
//!
//! whose left-hand side is exactly one coefficient of a polynomial that
//! vanishes wherever `det(A ± iD)` does (see [`crate::oracle`]). If all of
//! them hold, `A` is stable, and the deleted submatrix `A|_k` has
//! `det(A|_k ± iD) ≠ 0` for every positive diagonal `D`, then `A` is
//! D-stable. [`certify`] applies this recursively down to `2 x 2` blocks.

mod base;
mod certify;
mod crit1;
mod explicit;
mod pairs;
mod replay;

pub use base::{base_dstable, base_nonvanishing, BaseEvidence, BaseKind};
pub use certify::{
    certify, Certificate, CertificateKind, CertifyOptions, LevelEvidence, PivotChain,
    SearchPolicy, SearchSummary, Violation, ALL_CHAINS_MAX_DIM,
};
pub use crit1::{crit1_on, crit1_value, theorem1_on, theorem1_test, Crit1Instance, Theorem1Outcome};
pub use explicit::{proposition1_n3, reduced_forms_n4, Proposition1, ReducedForms};
pub use pairs::{chi_exponent, enumerate_alpha_beta, enumerate_pairs};
pub use replay::{replay, ReplayError};

pub(crate) mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*v as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = usize::deserialize(d)?;
        v.checked_sub(1)
            .ok_or_else(|| serde::de::Error::custom("indices are 1-based"))
    }
}
