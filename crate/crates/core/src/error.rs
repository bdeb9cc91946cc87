use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("expected {expected} entries for a square matrix, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("dimension {n} exceeds the cap of {max}")]
    DimensionCap { n: usize, max: usize },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("zero pivot at index {pivot}")]
    ZeroPivot { pivot: usize },
    #[error("|beta| = {n_beta} and |alpha| = {n_alpha} violate the parity/range rule for n = {n}")]
    Parity {
        n: usize,
        n_alpha: usize,
        n_beta: usize,
    },
    #[error("singular matrix")]
    Singular,
    #[error("eigenvalue iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("{what} guard exceeded: n = {n}, max = {max}")]
    Guard {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
}
