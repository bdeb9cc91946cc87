//! Exact rational dense linear algebra.
//!
//! Every sign-sensitive quantity in the crate is computed here without
//! rounding. Indices are 0-based in the API; [`IndexSet`] displays and
//! serializes 1-based to match the usual minor notation `A(1 2; 1 2)`.

mod complex;
mod det;
mod index_set;
mod matrix;
mod minors;
mod schur;
pub mod serde_rational;

pub use complex::{complex_det, ComplexRational, ImagSign};
pub use det::{det, solve};
pub use index_set::{IndexSet, Subsets};
pub use matrix::{parse_rational, Matrix, MAX_DIM};
pub use minors::{minor_table, principal_minor, MinorTable};
pub use schur::{det_via_leading_block, det_via_pivot, schur_complement};

/// Exact rational scalar, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
