//! Hurwitz stability (exact), P-matrix classes, and the floating-point
//! spectral abscissa used by the scaling oracle.

mod charpoly;
mod hurwitz;
mod pclass;
mod spectral;

pub use charpoly::{char_poly, CharPoly};
pub use hurwitz::{hurwitz_stable, HurwitzVerdict};
pub use pclass::{classify_p, necessary_dstability, NecessaryCheck, PClassReport};
pub use spectral::{spectral_abscissa, spectral_abscissa_f64, MAX_QR_SWEEPS};
