//! Parameter grids over matrix templates.

use std::collections::{BTreeMap, BTreeSet};

use dstab_core::dstability::{certify, CertificateKind, CertifyOptions};
use dstab_core::exec::Exec;
use dstab_core::oracle::{search_counterexample_with, SearchConfig};
use dstab_core::stability::{hurwitz_stable, necessary_dstability};
use dstab_core::Rational;
use num_traits::{Signed, ToPrimitive};

use crate::doc::MatrixDocument;
use crate::expr::Expr;

/// Upper bound on grid points per sweep.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SweepError {
    #[error("bad --param `{text}`: {reason}")]
    Spec { text: String, reason: String },
    #[error("parameter `{0}` declared twice")]
    Duplicate(String),
    #[error("template parameter `{0}` is not bound by any --param")]
    Unbound(String),
    #[error("derived parameter `{name}` refers to `{symbol}`, which is not an axis or an earlier parameter")]
    Forward { name: String, symbol: String },
    #[error("grid is empty")]
    Empty,
    #[error("grid has more than {MAX_POINTS} points")]
    TooLarge,
    #[error("at {point}: {reason}")]
    Point { point: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamSpec {
    Axis {
        name: String,
        min: Rational,
        max: Rational,
        step: Rational,
    },
    Derived {
        name: String,
        expr: Expr,
    },
}

impl ParamSpec {
    pub fn name(&self) -> &str {
        match self {
            ParamSpec::Axis { name, .. } | ParamSpec::Derived { name, .. } => name,
        }
    }

    /// `NAME=MIN:MAX:STEP` for an axis, `NAME=EXPR` for a derived value.
    pub fn parse(text: &str) -> Result<Self, SweepError> {
        let fail = |reason: &str| SweepError::Spec {
            text: text.into(),
            reason: reason.into(),
        };
        let (name, rhs) = text.split_once('=').ok_or_else(|| fail("expected NAME=..."))?;
        let name = name.trim();
        let valid = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(fail("invalid parameter name"));
        }
        let constant = |s: &str| -> Result<Rational, SweepError> {
            let e = Expr::parse(s).map_err(|e| fail(&e.to_string()))?;
            e.eval(&BTreeMap::new()).map_err(|_| fail("axis bounds must be constants"))
        };
        let parts: Vec<&str> = rhs.split(':').collect();
        match parts[..] {
            [min, max, step] => {
                let (min, max, step) = (constant(min)?, constant(max)?, constant(step)?);
                if !step.is_positive() {
                    return Err(fail("step must be positive"));
                }
                if min > max {
                    return Err(fail("min exceeds max"));
                }
                Ok(ParamSpec::Axis {
                    name: name.into(),
                    min,
                    max,
                    step,
                })
            }
            [expr] => Ok(ParamSpec::Derived {
                name: name.into(),
                expr: Expr::parse(expr).map_err(|e| fail(&e.to_string()))?,
            }),
            _ => Err(fail("expected MIN:MAX:STEP or an expression")),
        }
    }
}

/// Axes vary row-major in declaration order, the first axis outermost.
#[derive(Clone, Debug)]
pub struct SweepGrid {
    specs: Vec<ParamSpec>,
}

impl SweepGrid {
    pub fn new(specs: Vec<ParamSpec>) -> Result<Self, SweepError> {
        let mut seen = BTreeSet::new();
        for s in &specs {
            if !seen.insert(s.name().to_string()) {
                return Err(SweepError::Duplicate(s.name().into()));
            }
        }
        let mut known: BTreeSet<&str> = specs
            .iter()
            .filter(|s| matches!(s, ParamSpec::Axis { .. }))
            .map(|s| s.name())
            .collect();
        for s in &specs {
            if let ParamSpec::Derived { name, expr } = s {
                if let Some(sym) = expr.symbols().into_iter().find(|x| !known.contains(x.as_str())) {
                    return Err(SweepError::Forward {
                        name: name.clone(),
                        symbol: sym,
                    });
                }
                known.insert(name);
            }
        }
        let grid = SweepGrid { specs };
        let mut count: usize = 1;
        for values in grid.axis_values()? {
            count = count.saturating_mul(values.len());
        }
        if count == 0 {
            return Err(SweepError::Empty);
        }
        if count > MAX_POINTS {
            return Err(SweepError::TooLarge);
        }
        Ok(grid)
    }

    pub fn names(&self) -> Vec<&str> {
        self.specs.iter().map(|s| s.name()).collect()
    }

    fn axis_values(&self) -> Result<Vec<Vec<Rational>>, SweepError> {
        let mut out = Vec::new();
        for s in &self.specs {
            if let ParamSpec::Axis { min, max, step, .. } = s {
                let span = (max - min) / step;
                let count = span
                    .floor()
                    .to_integer()
                    .to_usize()
                    .filter(|&c| c < MAX_POINTS)
                    .ok_or(SweepError::TooLarge)?;
                out.push((0..=count).map(|i| min + step * Rational::from_integer(i.into())).collect());
            }
        }
        Ok(out)
    }

    /// Every grid point as a full assignment, with values listed in
    /// declaration order alongside.
    pub fn points(&self) -> Result<Vec<(BTreeMap<String, Rational>, Vec<Rational>)>, SweepError> {
        let axes = self.axis_values()?;
        let mut idx = vec![0usize; axes.len()];
        let mut out = Vec::new();
        loop {
            let mut env = BTreeMap::new();
            let mut a = 0;
            for s in &self.specs {
                if let ParamSpec::Axis { name, .. } = s {
                    env.insert(name.clone(), axes[a][idx[a]].clone());
                    a += 1;
                }
            }
            for s in &self.specs {
                if let ParamSpec::Derived { name, expr } = s {
                    let v = expr.eval(&env).expect("checked in new");
                    env.insert(name.clone(), v);
                }
            }
            let row = self.specs.iter().map(|s| env[s.name()].clone()).collect();
            out.push((env, row));
            // odometer, last axis fastest
            let mut k = axes.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < axes[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

#[derive(Copy, Clone, Debug)]
pub struct SweepOptions {
    pub oracle_trials: Option<usize>,
    pub seed: u64,
    pub exec: Exec,
}

pub const VERDICT_COLUMNS: [&str; 4] = ["hurwitz_stable", "necessary_ok", "theorem1_certified", "oracle_counterexample"];

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.into()
}

fn describe(env: &BTreeMap<String, Rational>) -> String {
    env.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

/// Evaluates every grid point exactly and renders the CSV.
pub fn run_sweep(doc: &MatrixDocument, grid: &SweepGrid, opts: &SweepOptions) -> Result<String, SweepError> {
    let bound: BTreeSet<&str> = grid.names().into_iter().collect();
    if let Some(p) = doc.parameter_names().into_iter().find(|p| !bound.contains(p.as_str())) {
        return Err(SweepError::Unbound(p));
    }
    let points = grid.points()?;
    let rows = opts.exec.map(&points, |(env, values)| -> Result<Vec<String>, SweepError> {
        let point_err = |reason: String| SweepError::Point {
            point: describe(env),
            reason,
        };
        let m = doc.bind(env).map_err(|e| point_err(e.to_string()))?;
        let stable = hurwitz_stable(&m).stable;
        let necessary = necessary_dstability(&m).map_err(|e| point_err(e.to_string()))?.passed;
        let copts = CertifyOptions {
            exec: Exec::Sequential,
            ..Default::default()
        };
        let cert = certify(&m, &copts).map_err(|e| point_err(e.to_string()))?;
        let oracle = match opts.oracle_trials {
            Some(trials) if trials > 0 => {
                let cfg = SearchConfig {
                    trials,
                    seed: opts.seed,
                    exec: Exec::Sequential,
                };
                flag(search_counterexample_with(&m, &cfg).counterexample.is_some())
            }
            _ => String::new(),
        };
        let mut row: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        row.extend([
            flag(stable),
            flag(necessary),
            flag(cert.kind == CertificateKind::DStable),
            oracle,
        ]);
        Ok(row)
    });
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = grid.names();
    header.extend(VERDICT_COLUMNS);
    w.write_record(&header).expect("in-memory write");
    for row in rows {
        w.write_record(&row?).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}
