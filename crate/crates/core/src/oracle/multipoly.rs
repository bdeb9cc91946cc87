use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::linalg::Rational;

/// Sparse polynomial with exact coefficients, keyed by exponent vectors.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exponents: Vec<u8>, coeff: Rational) {
        assert_eq!(exponents.len(), self.nvars, "exponent vector length");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coefficient(&self, exponents: &[u8]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &p) in x.iter().zip(e) {
                for _ in 0..p {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    pub fn max_exponent(&self) -> u8 {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }

    /// All coefficients nonnegative and at least one positive.
    pub fn has_positive_signature(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative()) && self.terms.values().any(|c| c.is_positive())
    }
}
