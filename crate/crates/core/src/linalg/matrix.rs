use std::fmt;
use std::ops::Index;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{IndexSet, Rational};
use crate::error::{Error, Result};

/// Largest dimension accepted for a full principal-minor table (`2^n` cells).
pub const MAX_DIM: usize = 16;

/// Dense square matrix with exact rational entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct Matrix {
    n: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(n: usize, entries: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::Shape {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(Matrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Matrix::new(n, entries)
    }

    /// Integer matrix from nested slices. Panics on a ragged or empty input;
    /// meant for fixtures and tests.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        Matrix::from_rows(rows).expect("square integer matrix")
    }

    pub fn identity(n: usize) -> Self {
        Matrix::diagonal(&vec![Rational::one(); n])
    }

    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let n = d.len();
        let mut m = Matrix::zeros(n);
        for (i, v) in d.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn diag(&self, i: usize) -> &Rational {
        self.get(i, i)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    pub fn check_set(&self, s: IndexSet) -> Result<()> {
        if s.span() <= self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: s.span() - 1,
                n: self.n,
            })
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    /// `diag(d) * self`: row `i` scaled by `d[i]`.
    pub fn scale_rows(&self, d: &[Rational]) -> Matrix {
        assert_eq!(d.len(), self.n, "dimension mismatch");
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] *= &d[i];
            }
        }
        out
    }

    /// Principal submatrix on the rows and columns of `s`, in increasing order.
    pub fn principal_submatrix(&self, s: IndexSet) -> Matrix {
        let idx = s.to_vec();
        let k = idx.len();
        let mut entries = Vec::with_capacity(k * k);
        for &i in &idx {
            for &j in &idx {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { n: k, entries }
    }

    /// Submatrix with row and column `k` deleted (`A|_k`).
    pub fn delete(&self, k: usize) -> Matrix {
        self.principal_submatrix(IndexSet::full(self.n).without(k))
    }

    /// `P^T A P` where `perm[i]` is the original index placed at position `i`.
    pub fn permute(&self, perm: &[usize]) -> Matrix {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.get(perm[i], perm[j]).clone();
            }
        }
        out
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| rational_to_f64(self.get(i, j)))
    }

    /// Integer matrix obtained by clearing the denominators of each row,
    /// together with the per-row multipliers.
    pub(crate) fn row_scaled_integers(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let n = self.n;
        let mut ints = Vec::with_capacity(n * n);
        let mut scales = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
            for v in row {
                ints.push(v.numer() * (&l / v.denom()));
            }
            scales.push(l);
        }
        (ints, scales)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        self.get(i, j)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<String>>,
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        MatrixRepr {
            n: m.n,
            entries: (0..m.n)
                .map(|i| m.row(i).iter().map(|v| v.to_string()).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = String;

    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        let rows = r
            .entries
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        let m = Matrix::from_rows(rows).map_err(|e| e.to_string())?;
        if m.n != r.n {
            return Err(format!("declared n = {} but entries are {}x{}", r.n, m.n, m.n));
        }
        Ok(m)
    }
}

pub(crate) fn rational_to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        if v.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses an exact rational literal: an integer (`-6`), a fraction (`1/3`),
/// or a decimal with optional exponent (`0.25`, `1.5e-3`). Decimals are
/// converted exactly. Both ASCII `-` and U+2212 are accepted as minus signs.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Precondition(format!("not a rational literal: {text:?}"));
    let s = text.trim().replace('\u{2212}', "-");
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim()).ok_or_else(bad)?;
        let den = parse_decimal(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(Error::Precondition(format!("zero denominator in {text:?}")));
        }
        return Ok(num / den);
    }
    parse_decimal(&s).ok_or_else(bad)
}

// keeps `1e999999999` from allocating a huge integer
const MAX_EXPONENT: i32 = 4096;

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok().filter(|e| e.abs() <= MAX_EXPONENT)?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(10.into());
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    #[test]
    fn parses_literals_exactly() {
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational("-6").unwrap(), rat(-6));
        assert_eq!(parse_rational("\u{2212}5").unwrap(), rat(-5));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("1.5e-3").unwrap(), ratio(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), rat(200));
        assert_eq!(parse_rational(" 4/-6 ").unwrap(), ratio(-2, 3));
        for bad in ["", "q", "1/0", "1..2", "-", "3x", "1/", "1e99999"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn shape_errors() {
        assert_eq!(Matrix::new(0, vec![]), Err(Error::EmptyMatrix));
        assert!(matches!(Matrix::new(2, vec![rat(1)]), Err(Error::Shape { .. })));
        assert!(Matrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(3)]]).is_err());
    }

    #[test]
    fn permute_and_delete() {
        let m = Matrix::from_i64(&[[1, 2, 3], [4, 5, 6], [7, 8, 9]]);
        assert_eq!(m.delete(1), Matrix::from_i64(&[[1, 3], [7, 9]]));
        let p = m.permute(&[2, 0, 1]);
        assert_eq!(p, Matrix::from_i64(&[[9, 7, 8], [3, 1, 2], [6, 4, 5]]));
        assert_eq!(m.scale_rows(&[rat(1), rat(0), rat(2)]).row(2), &[rat(14), rat(16), rat(18)]);
    }

    #[test]
    fn serde_round_trip() {
        let m = Matrix::from_rows(vec![vec![ratio(1, 3), rat(-2)], vec![rat(0), ratio(-7, 2)]]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"n":2,"entries":[["1/3","-2"],["0","-7/2"]]}"#);
        assert_eq!(serde_json::from_str::<Matrix>(&json).unwrap(), m);
    }
}
