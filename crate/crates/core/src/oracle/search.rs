use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::linalg::{Matrix, Rational};
use crate::stability::{hurwitz_stable, spectral_abscissa_f64};

/// A float abscissa at or above this counts as a candidate counterexample.
pub const DECISION_MARGIN: f64 = 1e-6;

/// Diagonal entries are drawn log-uniformly from this range.
pub const SAMPLE_RANGE: (f64, f64) = (1e-3, 1e3);

const CHUNK: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSample {
    pub entries: Vec<f64>,
    pub seed: u64,
    pub trial_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub d: DiagonalSample,
    /// Exact values of `d`, for which `diag(d) A` is unstable exactly.
    #[serde(with = "crate::linalg::serde_rational::vec")]
    pub d_exact: Vec<Rational>,
    pub abscissa: f64,
    /// `abscissa - DECISION_MARGIN`.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub trials_requested: usize,
    pub trials_run: usize,
    pub eigen_failures: usize,
    /// Candidates with a positive abscissa below the margin, or above it
    /// but stable in exact arithmetic.
    pub discarded: usize,
    pub counterexample: Option<Counterexample>,
}

impl SearchOutcome {
    pub fn all_failed(&self) -> bool {
        self.trials_run > 0 && self.eigen_failures == self.trials_run
    }
}

#[derive(Copy, Clone, Debug)]
pub struct SearchConfig {
    pub trials: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl SearchConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        SearchConfig {
            trials,
            seed,
            exec: Exec::default(),
        }
    }
}

/// Corner probes come first: all ones, then each entry at the top of the
/// range, then each at the bottom.
fn corner(n: usize, t: usize) -> Option<Vec<f64>> {
    let (lo, hi) = SAMPLE_RANGE;
    match t {
        0 => Some(vec![1.0; n]),
        t if t <= n => Some((0..n).map(|i| if i == t - 1 { hi } else { 1.0 }).collect()),
        t if t <= 2 * n => Some((0..n).map(|i| if i == t - 1 - n { lo } else { 1.0 }).collect()),
        _ => None,
    }
}

pub(crate) fn sample(n: usize, seed: u64, t: usize) -> Vec<f64> {
    if let Some(d) = corner(n, t) {
        return d;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    let (lo, hi) = (SAMPLE_RANGE.0.log10(), SAMPLE_RANGE.1.log10());
    (0..n).map(|_| 10f64.powf(rng.random_range(lo..=hi))).collect()
}

enum Trial {
    Failed,
    Quiet,
    Near,
    Candidate(f64),
}

fn run_trial(a: &DMatrix<f64>, d: &[f64]) -> Trial {
    let mut da = a.clone();
    for (i, di) in d.iter().enumerate() {
        da.row_mut(i).scale_mut(*di);
    }
    match spectral_abscissa_f64(&da) {
        Err(_) => Trial::Failed,
        Ok(x) if x >= DECISION_MARGIN => Trial::Candidate(x),
        Ok(x) if x > 0.0 => Trial::Near,
        Ok(_) => Trial::Quiet,
    }
}

/// [`search_counterexample_with`] using the default executor.
pub fn search_counterexample(m: &Matrix, trials: usize, seed: u64) -> SearchOutcome {
    search_counterexample_with(m, &SearchConfig::new(trials, seed))
}

/// Looks for a positive diagonal `d` with `diag(d) A` unstable.
///
/// Trial `t` draws its entries from a generator keyed by `(seed, t)`, and
/// trials are scanned in index order, so the result does not depend on the
/// executor or thread count. A float candidate is accepted only when the
/// exact Hurwitz test on the rational value of `d` confirms instability.
/// Finding nothing proves nothing.
pub fn search_counterexample_with(m: &Matrix, cfg: &SearchConfig) -> SearchOutcome {
    let n = m.dim();
    let a = m.to_f64();
    let mut out = SearchOutcome {
        trials_requested: cfg.trials,
        trials_run: 0,
        eigen_failures: 0,
        discarded: 0,
        counterexample: None,
    };
    let mut start = 0;
    while start < cfg.trials {
        let end = (start + CHUNK).min(cfg.trials);
        let results = cfg.exec.map_range(start..end, |t| {
            let d = sample(n, cfg.seed, t);
            let r = run_trial(&a, &d);
            (d, r)
        });
        for (offset, (d, r)) in results.into_iter().enumerate() {
            out.trials_run += 1;
            match r {
                Trial::Failed => out.eigen_failures += 1,
                Trial::Quiet => {}
                Trial::Near => out.discarded += 1,
                Trial::Candidate(x) => {
                    let d_exact: Vec<Rational> = d
                        .iter()
                        .map(|v| Rational::from_float(*v).expect("finite sample"))
                        .collect();
                    if hurwitz_stable(&m.scale_rows(&d_exact)).stable {
                        out.discarded += 1;
                        continue;
                    }
                    out.counterexample = Some(Counterexample {
                        d: DiagonalSample {
                            entries: d,
                            seed: cfg.seed,
                            trial_index: start + offset,
                        },
                        d_exact,
                        abscissa: x,
                        margin: x - DECISION_MARGIN,
                    });
                    return out;
                }
            }
        }
        start = end;
    }
    out
}
