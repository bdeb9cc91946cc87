use crate::error::{Error, Result};
use crate::linalg::IndexSet;

/// The sign exponent χ of the leading (`γ = ∅`) term for a pair with
/// `|α| = n_alpha`, `|β| = n_beta` in dimension `n`.
pub fn chi_exponent(n: usize, n_alpha: usize, n_beta: usize) -> Result<usize> {
    if n == 0 || n_beta > n_alpha || n_alpha > n - 1 || !(n_alpha - n_beta).is_multiple_of(2) {
        return Err(Error::Parity { n, n_alpha, n_beta });
    }
    let m = n - 1;
    Ok(if (m - n_alpha).is_multiple_of(2) {
        m - (n_beta + n_alpha) / 2
    } else {
        (m - n_beta) / 2 + (m - n_alpha) / 2
    })
}

/// All `(α, β)` with `β ⊆ α ⊆ ground`, `|α| ≥ 1` and `|β| ≡ |α| (mod 2)`,
/// ordered by `|α|`, then `α` lexicographically, then `|β|`, then `β`.
pub fn enumerate_pairs(ground: IndexSet) -> Vec<(IndexSet, IndexSet)> {
    let mut out = Vec::new();
    for size in 1..=ground.len() {
        for alpha in ground.subsets_of_len(size) {
            for beta_size in (size % 2..=size).step_by(2) {
                for beta in alpha.subsets_of_len(beta_size) {
                    out.push((alpha, beta));
                }
            }
        }
    }
    out
}

/// Pairs for pivot `k` (0-based) in dimension `n`.
pub fn enumerate_alpha_beta(n: usize, k: usize) -> Result<Vec<(IndexSet, IndexSet)>> {
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    Ok(enumerate_pairs(IndexSet::full(n).without(k)))
}
