//! Exact determinantal sufficient test for matrix D-stability.
//!
//! A real square matrix `A` is *D-stable* when `DA` is Hurwitz stable for
//! every positive diagonal `D`. This crate certifies D-stability through a
//! family of inequalities between principal minors, evaluated over exact
//! rationals, and backs the certificates with an independent floating-point
//! counterexample search.
//!
//! Module map:
//!
//! * [`linalg`]: exact rational matrices, determinants, principal minors,
//!   Schur complements and complex determinants `det(A ± iD)`.
//! * [`stability`]: characteristic polynomial, exact Hurwitz test,
//!   P-matrix classes and the float spectral abscissa.
//! * [`dstability`]: the minor inequalities, the per-pivot test and the
//!   recursive certification pipeline.
//! * [`oracle`]: determinant expansions, the polynomial `F` whose coefficients
//!   are the inequality values, and the randomized scaling search.
//! * [`exec`]: sequential / rayon dispatch for the data-parallel loops.

pub mod dstability;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod oracle;
pub mod stability;

pub use error::{Error, Result};
pub use linalg::{ComplexRational, IndexSet, Matrix, MinorTable, Rational};
