use num_traits::{Signed, Zero};
use thiserror::Error;

use super::{base_dstable, chi_exponent, enumerate_pairs, BaseKind, Certificate, CertificateKind, Crit1Instance};
use crate::linalg::{principal_minor, IndexSet, Matrix, Rational};
use crate::stability::{hurwitz_stable, necessary_dstability};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("certificate rejected: {0}")]
    Rejected(String),
}

fn reject<T>(msg: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError::Rejected(msg.into()))
}

fn minor(m: &Matrix, s: IndexSet) -> Result<Rational, ReplayError> {
    Ok(principal_minor(m, s)?)
}

/// Recomputes one inequality from determinants of `m` directly, without a
/// minor table.
fn recompute(m: &Matrix, subset: IndexSet, inst: &Crit1Instance) -> Result<Crit1Instance, ReplayError> {
    let k = inst.pivot;
    let pivot = IndexSet::singleton(k);
    let a_kk = minor(m, pivot)?;
    if a_kk.is_zero() {
        return reject(format!("zero pivot {}", k + 1));
    }
    let chi = chi_exponent(subset.len(), inst.alpha.len(), inst.beta.len())?;
    let mut acc = Rational::zero();
    for gamma in inst.alpha.difference(inst.beta).subsets() {
        let term = minor(m, inst.alpha.difference(gamma))? * minor(m, inst.beta.union(gamma).union(pivot))?;
        if (chi + gamma.len()) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    let value = acc / a_kk;
    Ok(Crit1Instance {
        pivot: k,
        dim: subset.len(),
        alpha: inst.alpha,
        beta: inst.beta,
        chi,
        satisfied: !value.is_negative(),
        value,
    })
}

fn check_instance(m: &Matrix, subset: IndexSet, inst: &Crit1Instance) -> Result<(), ReplayError> {
    if !subset.contains(inst.pivot) || !inst.alpha.is_subset(subset.without(inst.pivot)) || !inst.beta.is_subset(inst.alpha) {
        return reject(format!("instance alpha {} beta {} does not fit {subset}", inst.alpha, inst.beta));
    }
    let fresh = recompute(m, subset, inst)?;
    if &fresh != inst {
        return reject(format!(
            "instance alpha {} beta {} at pivot {}: stored {} but recomputed {}",
            inst.alpha,
            inst.beta,
            inst.pivot + 1,
            inst.value,
            fresh.value
        ));
    }
    Ok(())
}

fn nonvanishing(m: &Matrix, s: IndexSet) -> Result<bool, ReplayError> {
    let idx = s.to_vec();
    match idx[..] {
        [_] => Ok(true),
        [i, j] => {
            let (c11, c22) = (m.get(i, i), m.get(j, j));
            let opposite = c11.is_positive() && c22.is_negative()
                || c11.is_negative() && c22.is_positive()
                || c11.is_zero() && c22.is_zero();
            Ok(!(minor(m, s)?.is_positive() && opposite))
        }
        _ => reject(format!("base block {s} has more than two indices")),
    }
}

/// Re-checks a certificate against the matrix it claims to describe.
pub fn replay(m: &Matrix, cert: &Certificate) -> Result<(), ReplayError> {
    let n = m.dim();
    if cert.dim != n {
        return reject(format!("certificate is for dimension {}, matrix has {n}", cert.dim));
    }
    let stability = hurwitz_stable(m);
    if stability != cert.stability {
        return reject("Hurwitz determinants differ");
    }
    match cert.kind {
        CertificateKind::NotStable => {
            if stability.stable {
                return reject("matrix is stable");
            }
            Ok(())
        }
        CertificateKind::Counterexample => {
            let Some(d) = &cert.counterexample_d else {
                return reject("counterexample without a diagonal");
            };
            if d.len() != n || d.iter().any(|x| !x.is_positive()) {
                return reject("diagonal must have n positive entries");
            }
            if hurwitz_stable(&m.scale_rows(d)).stable {
                return reject("diag(d) A is stable");
            }
            Ok(())
        }
        CertificateKind::NecessaryFailed => {
            let check = necessary_dstability(m)?;
            if !stability.stable || check.passed || cert.necessary.as_ref() != Some(&check.report) {
                return reject("necessary condition evidence does not match");
            }
            Ok(())
        }
        CertificateKind::Inconclusive => {
            if let Some(v) = &cert.violation {
                check_instance(m, v.subset, &v.instance)?;
                if v.instance.satisfied {
                    return reject("recorded violation is satisfied");
                }
            }
            Ok(())
        }
        CertificateKind::DStable => replay_dstable(m, cert),
    }
}

fn replay_dstable(m: &Matrix, cert: &Certificate) -> Result<(), ReplayError> {
    let n = m.dim();
    if !cert.stability.stable {
        return reject("D-stable certificate for an unstable matrix");
    }
    let check = necessary_dstability(m)?;
    if !check.passed || cert.necessary.as_ref() != Some(&check.report) {
        return reject("necessary condition evidence does not match");
    }
    let Some(base) = &cert.base else {
        return reject("missing base case");
    };
    if !base.holds {
        return reject("base case marked as failing");
    }
    if n <= 2 {
        if base.kind != BaseKind::DStable || base.subset != IndexSet::full(n) || !base_dstable(m)? {
            return reject("small-matrix base case does not hold");
        }
        return Ok(());
    }
    let Some(chain) = &cert.pivot_chain else {
        return reject("missing pivot chain");
    };
    if chain.len() != cert.levels.len() || chain.is_empty() {
        return reject("pivot chain and levels disagree");
    }
    let mut s = IndexSet::full(n);
    for (level, &k) in cert.levels.iter().zip(&chain.0) {
        if level.subset != s || level.pivot != k || !s.contains(k) {
            return reject(format!("level for pivot {} does not follow the chain", k + 1));
        }
        let expected = enumerate_pairs(s.without(k));
        if expected.len() != level.instances.len() {
            return reject(format!("level {s} lists {} of {} inequalities", level.instances.len(), expected.len()));
        }
        for (inst, (alpha, beta)) in level.instances.iter().zip(expected) {
            if inst.pivot != k || inst.alpha != alpha || inst.beta != beta {
                return reject(format!("level {s}: unexpected instance alpha {} beta {}", inst.alpha, inst.beta));
            }
            check_instance(m, s, inst)?;
            if !inst.satisfied {
                return reject(format!("level {s}: alpha {alpha} beta {beta} is violated"));
            }
        }
        s = s.without(k);
    }
    if base.subset != s {
        return reject("base case is not the final submatrix");
    }
    match base.kind {
        BaseKind::Assumed => {
            if cert.assumed_dstable_dim != Some(s.len()) {
                return reject("assumed submatrix does not match the declared dimension");
            }
        }
        BaseKind::NonVanishing => {
            if !nonvanishing(m, s)? {
                return reject(format!("base block {s} admits det(C + iD) = 0"));
            }
        }
        BaseKind::DStable => return reject("base kind invalid for n > 2"),
    }
    Ok(())
}
