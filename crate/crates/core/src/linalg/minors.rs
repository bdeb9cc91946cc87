use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::det::bareiss_in_place;
use super::{IndexSet, Matrix, Rational, MAX_DIM};
use crate::error::{Error, Result};

/// Principal minor `A(α; α)`; the empty minor is 1.
pub fn principal_minor(m: &Matrix, alpha: IndexSet) -> Result<Rational> {
    m.check_set(alpha)?;
    if alpha.is_empty() {
        return Ok(Rational::one());
    }
    Ok(super::det(&m.principal_submatrix(alpha)))
}

/// All `2^n` principal minors of a matrix, indexed by [`IndexSet`] bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorTable {
    n: usize,
    values: Vec<Rational>,
}

impl MinorTable {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Minor on `alpha`. Panics if `alpha` is outside `[n]`.
    pub fn get(&self, alpha: IndexSet) -> &Rational {
        &self.values[alpha.bits() as usize]
    }

    pub fn try_get(&self, alpha: IndexSet) -> Result<&Rational> {
        self.values.get(alpha.bits() as usize).ok_or(Error::IndexOutOfRange {
            index: alpha.span().saturating_sub(1),
            n: self.n,
        })
    }

    pub fn det(&self) -> &Rational {
        self.values.last().expect("non-empty table")
    }

    pub fn iter(&self) -> impl Iterator<Item = (IndexSet, &Rational)> {
        self.values
            .iter()
            .enumerate()
            .map(|(bits, v)| (IndexSet::from_bits(bits as u32), v))
    }

    /// `sums[k]` is the sum of all principal minors of order `k`
    /// (`sums[0] = 1`).
    pub fn order_sums(&self) -> Vec<Rational> {
        self.order_sums_within(IndexSet::full(self.n))
    }

    /// Order sums restricted to minors whose index set lies inside `within`.
    pub fn order_sums_within(&self, within: IndexSet) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); within.len() + 1];
        for s in within.subsets() {
            sums[s.len()] += self.get(s);
        }
        sums
    }
}

/// Builds the full table of principal minors.
///
/// Denominators are cleared row-wise once; each minor is then an integer
/// Bareiss determinant divided by the product of the participating row
/// multipliers.
pub fn minor_table(m: &Matrix) -> Result<MinorTable> {
    let n = m.dim();
    if n > MAX_DIM {
        return Err(Error::DimensionCap { n, max: MAX_DIM });
    }
    let (ints, scales) = m.row_scaled_integers();
    let mut values = Vec::with_capacity(1 << n);
    let mut buf: Vec<BigInt> = Vec::with_capacity(n * n);
    for bits in 0..(1u32 << n) {
        let s = IndexSet::from_bits(bits);
        if s.is_empty() {
            values.push(Rational::one());
            continue;
        }
        let idx = s.to_vec();
        let k = idx.len();
        buf.clear();
        for &i in &idx {
            for &j in &idx {
                buf.push(ints[i * n + j].clone());
            }
        }
        let d = bareiss_in_place(&mut buf, k);
        let scale: BigInt = idx.iter().map(|&i| &scales[i]).product();
        values.push(Rational::new(d, scale));
    }
    Ok(MinorTable { n, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn ex1() -> Matrix {
        Matrix::from_i64(&[[-6, -5, 1], [-1, -2, -5], [-5, 3, -1]])
    }

    #[test]
    fn example_one_minors() {
        let m = ex1();
        let s = |v: &[usize]| IndexSet::from_indices(v.iter().map(|i| i - 1));
        assert_eq!(principal_minor(&m, s(&[1, 2])).unwrap(), rat(7));
        assert_eq!(principal_minor(&m, s(&[1, 3])).unwrap(), rat(11));
        assert_eq!(principal_minor(&m, s(&[2, 3])).unwrap(), rat(17));
        assert_eq!(principal_minor(&m, IndexSet::EMPTY).unwrap(), rat(1));
        assert!(matches!(
            principal_minor(&m, IndexSet::singleton(3)),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
        let t = minor_table(&m).unwrap();
        assert_eq!(t.det(), &rat(-235));
        assert_eq!(t.order_sums(), vec![rat(1), rat(-9), rat(35), rat(-235)]);
    }

    #[test]
    fn example_two_at_zero() {
        let m = Matrix::from_i64(&[[-1, 0, 0], [-1, -1, 0], [-1, -1, -1]]);
        let t = minor_table(&m).unwrap();
        assert_eq!(t.get(IndexSet::from_indices([0, 2])), &rat(1));
        assert_eq!(t.det(), &rat(-1));
    }

    #[test]
    fn identity_table() {
        let t = minor_table(&Matrix::identity(2)).unwrap();
        let vals: Vec<_> = t.iter().map(|(s, v)| (s.bits(), v.clone())).collect();
        assert_eq!(vals, vec![(0, rat(1)), (1, rat(1)), (2, rat(1)), (3, rat(1))]);
    }

    #[test]
    fn fractional_rows() {
        let m = Matrix::from_rows(vec![
            vec![ratio(1, 2), ratio(2, 3), rat(1)],
            vec![ratio(-1, 4), rat(3), ratio(5, 6)],
            vec![rat(2), ratio(-1, 3), ratio(1, 7)],
        ])
        .unwrap();
        let t = minor_table(&m).unwrap();
        for (s, v) in t.iter() {
            assert_eq!(v, &principal_minor(&m, s).unwrap(), "minor {s}");
        }
    }

    #[test]
    fn dimension_cap() {
        let m = Matrix::identity(MAX_DIM + 1);
        assert_eq!(
            minor_table(&m),
            Err(Error::DimensionCap { n: 17, max: MAX_DIM })
        );
    }
}
