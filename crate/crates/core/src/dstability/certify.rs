use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{base_dstable, base_nonvanishing, theorem1_on, BaseEvidence, BaseKind, Crit1Instance, Theorem1Outcome};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{minor_table, IndexSet, Matrix, MinorTable, Rational, MAX_DIM};
use crate::stability::{hurwitz_stable, HurwitzVerdict, PClassReport};

/// Largest dimension for which [`SearchPolicy::AllChains`] is allowed.
pub const ALL_CHAINS_MAX_DIM: usize = 6;

/// Indices deleted at each recursion level, outermost first (0-based;
/// serialized 1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PivotChain(pub Vec<usize>);

impl PivotChain {
    pub fn from_one_based(v: &[usize]) -> Result<Self> {
        v.iter()
            .map(|&i| i.checked_sub(1).ok_or(Error::Precondition("pivot indices are 1-based".into())))
            .collect::<Result<Vec<_>>>()
            .map(PivotChain)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PivotChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for PivotChain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(|k| k + 1).collect::<Vec<_>>().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PivotChain {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        PivotChain::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// How pivot chains are explored.
///
/// Chains are ordered lexicographically with pivots tried from the last
/// index down to the first at every level, so the conventional choice
/// `k = n` comes first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum SearchPolicy {
    /// Stop at the first successful chain.
    #[default]
    Default,
    /// Explore every chain (n ≤ [`ALL_CHAINS_MAX_DIM`]) and list the
    /// successful ones.
    AllChains,
    /// Try exactly this chain.
    Fixed(PivotChain),
}

impl SearchPolicy {
    fn label(&self) -> String {
        match self {
            SearchPolicy::Default => "default".into(),
            SearchPolicy::AllChains => "all-chains".into(),
            SearchPolicy::Fixed(c) => format!("fixed {c}"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CertifyOptions {
    pub policy: SearchPolicy,
    /// Treat principal submatrices of this dimension as known D-stable
    /// instead of recursing into them.
    pub assume_dstable_dim: Option<usize>,
    pub exec: Exec,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    DStable,
    NotStable,
    NecessaryFailed,
    Counterexample,
    Inconclusive,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::DStable => "d_stable",
            CertificateKind::NotStable => "not_stable",
            CertificateKind::NecessaryFailed => "necessary_failed",
            CertificateKind::Counterexample => "counterexample",
            CertificateKind::Inconclusive => "inconclusive",
        })
    }
}

/// The inequalities checked at one level of a successful chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEvidence {
    pub subset: IndexSet,
    #[serde(with = "super::one_based")]
    pub pivot: usize,
    pub instances: Vec<Crit1Instance>,
}

impl From<&Theorem1Outcome> for LevelEvidence {
    fn from(o: &Theorem1Outcome) -> Self {
        LevelEvidence {
            subset: o.subset,
            pivot: o.pivot,
            instances: o.instances.clone(),
        }
    }
}

/// First violated inequality met during the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub subset: IndexSet,
    pub instance: Crit1Instance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPivot {
    pub subset: IndexSet,
    #[serde(with = "super::one_based")]
    pub pivot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub policy: String,
    /// Distinct (submatrix, pivot) tests evaluated.
    pub pivot_tests: usize,
    pub skipped_zero_pivots: Vec<SkippedPivot>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub successful_chains: Option<Vec<PivotChain>>,
}

/// Outcome of the certification pipeline with the evidence needed to
/// re-check it from the matrix alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub dim: usize,
    pub pivot_chain: Option<PivotChain>,
    pub levels: Vec<LevelEvidence>,
    pub base: Option<BaseEvidence>,
    pub violation: Option<Violation>,
    #[serde(with = "crate::linalg::serde_rational::option_vec", default)]
    pub counterexample_d: Option<Vec<Rational>>,
    pub stability: HurwitzVerdict,
    /// Classification of `-A`, present once stability holds.
    pub necessary: Option<PClassReport>,
    pub assumed_dstable_dim: Option<usize>,
    pub search: Option<SearchSummary>,
    pub note: Option<String>,
}

impl Certificate {
    fn bare(kind: CertificateKind, dim: usize, stability: HurwitzVerdict) -> Self {
        Certificate {
            kind,
            dim,
            pivot_chain: None,
            levels: Vec::new(),
            base: None,
            violation: None,
            counterexample_d: None,
            stability,
            necessary: None,
            assumed_dstable_dim: None,
            search: None,
            note: None,
        }
    }

    /// Certificate for a positive diagonal `d` with `diag(d) A` unstable.
    pub fn counterexample(m: &Matrix, d: Vec<Rational>) -> Self {
        let mut c = Certificate::bare(CertificateKind::Counterexample, m.dim(), hurwitz_stable(m));
        c.counterexample_d = Some(d);
        c
    }

    /// Every inequality carried by the certificate: all levels for a
    /// D-stable verdict, the violated one for an inconclusive verdict.
    pub fn instances(&self) -> Vec<&Crit1Instance> {
        self.levels
            .iter()
            .flat_map(|l| l.instances.iter())
            .chain(self.violation.iter().map(|v| &v.instance))
            .collect()
    }
}

/// Runs the pipeline: Hurwitz stability, the P₀⁺ necessary condition, then
/// the recursive pivot-chain search.
///
/// Below the top level a submatrix only needs `det(C ± iD) ≠ 0` for all
/// positive diagonal `D`, which is what the inequalities propagate; the top
/// level adds stability to conclude D-stability.
pub fn certify(m: &Matrix, opts: &CertifyOptions) -> Result<Certificate> {
    let n = m.dim();
    if n > MAX_DIM {
        return Err(Error::DimensionCap { n, max: MAX_DIM });
    }
    validate_options(n, opts)?;

    let stability = hurwitz_stable(m);
    if !stability.stable {
        return Ok(Certificate::bare(CertificateKind::NotStable, n, stability));
    }
    let table = minor_table(m)?;
    let necessary = PClassReport::of_negation(&table);
    if !necessary.is_p0_plus {
        let mut c = Certificate::bare(CertificateKind::NecessaryFailed, n, stability);
        c.necessary = Some(necessary);
        return Ok(c);
    }

    let mut cert = Certificate::bare(CertificateKind::Inconclusive, n, stability);
    cert.necessary = Some(necessary);

    if n <= 2 {
        let holds = base_dstable(m)?;
        cert.base = Some(BaseEvidence {
            subset: IndexSet::full(n),
            kind: BaseKind::DStable,
            holds,
        });
        if holds {
            cert.kind = CertificateKind::DStable;
            cert.pivot_chain = Some(PivotChain::default());
        } else {
            cert.note = Some("base case fails".into());
        }
        return Ok(cert);
    }

    let mut search = Search::new(&table, opts);
    let full = IndexSet::full(n);
    let (found, successful) = match &opts.policy {
        SearchPolicy::Default => (search.first_chain(full)?, None),
        SearchPolicy::AllChains => {
            let all = search.all_chains(full)?;
            let list = all.iter().map(|(c, _)| PivotChain(c.clone())).collect();
            (all.into_iter().next(), Some(list))
        }
        SearchPolicy::Fixed(chain) => (search.fixed(full, &chain.0)?, None),
    };

    cert.search = Some(SearchSummary {
        policy: opts.policy.label(),
        pivot_tests: search.outcomes.len(),
        skipped_zero_pivots: search.skipped.clone(),
        successful_chains: successful,
    });
    match found {
        Some((chain, base)) => {
            let mut s = full;
            for &k in &chain {
                cert.levels.push(LevelEvidence::from(&search.outcomes[&(s.bits(), k)]));
                s = s.without(k);
            }
            if base.kind == BaseKind::Assumed {
                cert.assumed_dstable_dim = opts.assume_dstable_dim;
                cert.note = Some(format!(
                    "conditional on D-stability of the {0}x{0} submatrix {1}",
                    base.subset.len(),
                    base.subset
                ));
            }
            cert.kind = CertificateKind::DStable;
            cert.pivot_chain = Some(PivotChain(chain));
            cert.base = Some(base);
        }
        None => {
            cert.violation = search.violation.take();
            cert.note = Some(if cert.violation.is_some() {
                "no pivot chain satisfies every inequality".into()
            } else {
                "no applicable pivot chain".into()
            });
        }
    }
    Ok(cert)
}

fn validate_options(n: usize, opts: &CertifyOptions) -> Result<()> {
    if let Some(l) = opts.assume_dstable_dim {
        if l == 0 || l >= n {
            return Err(Error::Precondition(format!(
                "assumed D-stable submatrix dimension must be in 1..{n}, got {l}"
            )));
        }
    }
    match &opts.policy {
        SearchPolicy::AllChains if n > ALL_CHAINS_MAX_DIM => Err(Error::Guard {
            what: "all-chains search",
            n,
            max: ALL_CHAINS_MAX_DIM,
        }),
        SearchPolicy::Fixed(chain) => {
            let leaf = opts.assume_dstable_dim.unwrap_or(2).min(n);
            let expected = n.saturating_sub(leaf).max(if n > 2 { 1 } else { 0 });
            let mut seen = HashSet::new();
            if chain.len() != expected {
                return Err(Error::Precondition(format!(
                    "pivot chain {chain} must have length {expected}"
                )));
            }
            for &k in &chain.0 {
                if k >= n {
                    return Err(Error::IndexOutOfRange { index: k, n });
                }
                if !seen.insert(k) {
                    return Err(Error::Precondition(format!("pivot {} repeated in {chain}", k + 1)));
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

type Found = (Vec<usize>, BaseEvidence);

struct Search<'a> {
    table: &'a MinorTable,
    exec: Exec,
    assume: Option<usize>,
    outcomes: HashMap<(u32, usize), Theorem1Outcome>,
    failed: HashSet<u32>,
    violation: Option<Violation>,
    skipped: Vec<SkippedPivot>,
}

impl<'a> Search<'a> {
    fn new(table: &'a MinorTable, opts: &CertifyOptions) -> Self {
        Search {
            table,
            exec: opts.exec,
            assume: opts.assume_dstable_dim,
            outcomes: HashMap::new(),
            failed: HashSet::new(),
            violation: None,
            skipped: Vec::new(),
        }
    }

    fn leaf(&self, s: IndexSet) -> Result<Option<BaseEvidence>> {
        if self.assume == Some(s.len()) {
            return Ok(Some(BaseEvidence {
                subset: s,
                kind: BaseKind::Assumed,
                holds: true,
            }));
        }
        if s.len() <= 2 {
            return Ok(Some(BaseEvidence {
                subset: s,
                kind: BaseKind::NonVanishing,
                holds: base_nonvanishing(self.table, s)?,
            }));
        }
        Ok(None)
    }

    fn pivot_passes(&mut self, s: IndexSet, k: usize) -> Result<bool> {
        if self.table.get(IndexSet::singleton(k)).is_zero() {
            let skip = SkippedPivot { subset: s, pivot: k };
            if !self.skipped.contains(&skip) {
                self.skipped.push(skip);
            }
            return Ok(false);
        }
        if let Some(o) = self.outcomes.get(&(s.bits(), k)) {
            return Ok(o.passed);
        }
        let outcome = theorem1_on(self.table, s, k, self.exec)?;
        let passed = outcome.passed;
        if self.violation.is_none() {
            if let Some(inst) = outcome.first_violation() {
                self.violation = Some(Violation {
                    subset: s,
                    instance: inst.clone(),
                });
            }
        }
        self.outcomes.insert((s.bits(), k), outcome);
        Ok(passed)
    }

    fn first_chain(&mut self, s: IndexSet) -> Result<Option<Found>> {
        if let Some(base) = self.leaf(s)? {
            return Ok(base.holds.then_some((Vec::new(), base)));
        }
        if self.failed.contains(&s.bits()) {
            return Ok(None);
        }
        let pivots: Vec<usize> = s.iter().collect();
        for &k in pivots.iter().rev() {
            if !self.pivot_passes(s, k)? {
                continue;
            }
            if let Some((mut chain, base)) = self.first_chain(s.without(k))? {
                chain.insert(0, k);
                return Ok(Some((chain, base)));
            }
        }
        self.failed.insert(s.bits());
        Ok(None)
    }

    fn all_chains(&mut self, s: IndexSet) -> Result<Vec<Found>> {
        if let Some(base) = self.leaf(s)? {
            return Ok(if base.holds { vec![(Vec::new(), base)] } else { Vec::new() });
        }
        let mut out = Vec::new();
        let pivots: Vec<usize> = s.iter().collect();
        for &k in pivots.iter().rev() {
            if !self.pivot_passes(s, k)? {
                continue;
            }
            for (mut chain, base) in self.all_chains(s.without(k))? {
                chain.insert(0, k);
                out.push((chain, base));
            }
        }
        Ok(out)
    }

    fn fixed(&mut self, mut s: IndexSet, chain: &[usize]) -> Result<Option<Found>> {
        for &k in chain {
            if !self.pivot_passes(s, k)? {
                return Ok(None);
            }
            s = s.without(k);
        }
        match self.leaf(s)? {
            Some(base) if base.holds => Ok(Some((chain.to_vec(), base))),
            _ => Ok(None),
        }
    }
}
