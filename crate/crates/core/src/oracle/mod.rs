//! Independent checks of the determinantal test.
//!
//! `det(A + iD)` is expanded over principal minors, the bilinear form `F`
//! whose coefficients are the inequality values is built and evaluated, and
//! [`search_counterexample`] samples positive diagonal scalings looking for
//! an unstable `DA`.

mod expansion;
mod fpoly;
mod multipoly;
mod search;

pub use expansion::{expan_identity_check, im_det_expansion, re_det_expansion};
pub use fpoly::{eval_f, expand_f, monomial_for, EXPAND_MAX_DIM};
pub use multipoly::MultiPoly;
pub use search::{
    search_counterexample, search_counterexample_with, Counterexample, DiagonalSample, SearchConfig,
    SearchOutcome, DECISION_MARGIN, SAMPLE_RANGE,
};
