//! Matrix input documents in JSON or CSV form.

use std::collections::{BTreeMap, BTreeSet};

use dstab_core::linalg::MAX_DIM;
use dstab_core::{Matrix, Rational};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::expr::{Expr, ExprError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid CSV: {0}")]
    Csv(String),
    #[error("matrix has no rows")]
    Empty,
    #[error("dimension {0} exceeds the cap of {MAX_DIM}")]
    TooLarge(usize),
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("matrix is not square: {rows} rows of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("declared n = {declared} but the matrix has {rows} rows")]
    DimensionMismatch { declared: usize, rows: usize },
    #[error("entry ({row},{col}): {source}")]
    Entry {
        row: usize,
        col: usize,
        source: ExprError,
    },
    #[error("entry ({row},{col}) must be a string or a number")]
    EntryType { row: usize, col: usize },
    #[error("unknown placeholder `{0}`")]
    UnknownPlaceholder(String),
    #[error("parameter `{0}` does not appear in the entries")]
    UnusedParameter(String),
    #[error("parameter `{name}` occurrences do not match the entries")]
    Occurrences { name: String },
}

/// A square matrix whose entries may mention named parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixDocument {
    pub n: usize,
    pub entries: Vec<Vec<Expr>>,
    /// Parameter name to the 1-based `(row, col)` cells mentioning it.
    pub parameters: BTreeMap<String, Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: usize,
    entries: Vec<Vec<Value>>,
    #[serde(default)]
    parameters: BTreeMap<String, Option<Vec<[usize; 2]>>>,
}

fn occurrences(entries: &[Vec<Expr>]) -> BTreeMap<String, Vec<(usize, usize)>> {
    let mut out: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            for s in e.symbols() {
                out.entry(s).or_default().push((i + 1, j + 1));
            }
        }
    }
    out
}

fn check_shape(rows: &[Vec<Expr>]) -> Result<usize, DocError> {
    let n = rows.len();
    if n == 0 {
        return Err(DocError::Empty);
    }
    let cols = rows[0].len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(DocError::Ragged {
                row: i + 1,
                len: r.len(),
                expected: cols,
            });
        }
    }
    if cols != n {
        return Err(DocError::NotSquare { rows: n, cols });
    }
    if n > MAX_DIM {
        return Err(DocError::TooLarge(n));
    }
    Ok(n)
}

fn parse_cell(text: &str, row: usize, col: usize) -> Result<Expr, DocError> {
    Expr::parse(text).map_err(|source| DocError::Entry {
        row: row + 1,
        col: col + 1,
        source,
    })
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix) -> Self {
        let n = m.dim();
        MatrixDocument {
            n,
            entries: (0..n)
                .map(|i| m.row(i).iter().map(|v| Expr::Const(v.clone())).collect())
                .collect(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn parse_json(text: &str) -> Result<Self, DocError> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))?;
        let mut entries = Vec::with_capacity(raw.entries.len());
        for (i, row) in raw.entries.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, v) in row.iter().enumerate() {
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(num) => num.to_string(),
                    _ => return Err(DocError::EntryType { row: i + 1, col: j + 1 }),
                };
                out.push(parse_cell(&text, i, j)?);
            }
            entries.push(out);
        }
        let n = check_shape(&entries)?;
        if raw.n != n {
            return Err(DocError::DimensionMismatch {
                declared: raw.n,
                rows: n,
            });
        }
        let found = occurrences(&entries);
        if let Some(name) = found.keys().find(|k| !raw.parameters.contains_key(*k)) {
            return Err(DocError::UnknownPlaceholder(name.clone()));
        }
        for (name, listed) in &raw.parameters {
            let Some(actual) = found.get(name) else {
                return Err(DocError::UnusedParameter(name.clone()));
            };
            if let Some(listed) = listed {
                let listed: BTreeSet<(usize, usize)> = listed.iter().map(|[r, c]| (*r, *c)).collect();
                if listed != actual.iter().copied().collect() {
                    return Err(DocError::Occurrences { name: name.clone() });
                }
            }
        }
        Ok(MatrixDocument {
            n,
            entries,
            parameters: found,
        })
    }

    /// One row per line, comma separated. Names in cells are declared as
    /// parameters automatically.
    pub fn parse_csv(text: &str) -> Result<Self, DocError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut entries = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| DocError::Csv(e.to_string()))?;
            let row = record
                .iter()
                .enumerate()
                .map(|(j, cell)| parse_cell(cell, i, j))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(row);
        }
        let n = check_shape(&entries)?;
        Ok(MatrixDocument {
            n,
            parameters: occurrences(&entries),
            entries,
        })
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect();
        let parameters: BTreeMap<&String, Vec<[usize; 2]>> = self
            .parameters
            .iter()
            .map(|(k, v)| (k, v.iter().map(|&(r, c)| [r, c]).collect()))
            .collect();
        let mut s = serde_json::to_string_pretty(&json!({
            "n": self.n,
            "entries": entries,
            "parameters": parameters,
        }))
        .expect("document serializes");
        s.push('\n');
        s
    }

    pub fn parameter_names(&self) -> Vec<String> {
        self.parameters.keys().cloned().collect()
    }

    pub fn bind(&self, env: &BTreeMap<String, Rational>) -> Result<Matrix, DocError> {
        let mut rows = Vec::with_capacity(self.n);
        for (i, row) in self.entries.iter().enumerate() {
            let mut out = Vec::with_capacity(self.n);
            for (j, e) in row.iter().enumerate() {
                out.push(e.eval(env).map_err(|source| DocError::Entry {
                    row: i + 1,
                    col: j + 1,
                    source,
                })?);
            }
            rows.push(out);
        }
        Ok(Matrix::from_rows(rows).expect("document is square"))
    }

    /// The matrix when no parameters are present.
    pub fn concrete(&self) -> Result<Matrix, DocError> {
        self.bind(&BTreeMap::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dstab_core::linalg::{rat, ratio};

    const EX2: &str = r#"{"n": 3, "entries": [["-1","0","q"],["-1","-1","0"],["-1","-1","-1"]], "parameters": {"q": null}}"#;

    #[test]
    fn csv_example_one() {
        let d = MatrixDocument::parse_csv("\u{2212}6,\u{2212}5,1\n-1,-2,-5\n-5, 3, -1\n").unwrap();
        let m = d.concrete().unwrap();
        assert_eq!(m, Matrix::from_i64(&[[-6, -5, 1], [-1, -2, -5], [-5, 3, -1]]));
    }

    #[test]
    fn json_template() {
        let d = MatrixDocument::parse_json(EX2).unwrap();
        assert_eq!(d.parameters["q"], vec![(1, 3)]);
        assert!(d.concrete().is_err());
        let env = [("q".to_string(), ratio(1, 3))].into_iter().collect();
        assert_eq!(d.bind(&env).unwrap().get(0, 2), &ratio(1, 3));
    }

    #[test]
    fn numbers_convert_exactly() {
        let d = MatrixDocument::parse_json(r#"{"n":2,"entries":[[0.1, -3],[1e-2, "1/3"]]}"#).unwrap();
        let m = d.concrete().unwrap();
        assert_eq!(m.get(0, 0), &ratio(1, 10));
        assert_eq!(m.get(1, 0), &ratio(1, 100));
        assert_eq!(m.get(0, 1), &rat(-3));
    }

    #[test]
    fn round_trip() {
        for text in [EX2, r#"{"n":2,"entries":[["2*p - 1/2", 0.25],["-(p + q)", "q*-3"]],"parameters":{"p":[[1,1],[2,1]],"q":null}}"#] {
            let d = MatrixDocument::parse_json(text).unwrap();
            assert_eq!(MatrixDocument::parse_json(&d.to_json()).unwrap(), d);
        }
    }

    #[test]
    fn malformed() {
        let cases = [
            (r#"{"n":2,"entries":[["1","2"],["3"]]}"#, "entries, expected"),
            (r#"{"n":2,"entries":[["1","2"],["3","4"],["5","6"]]}"#, "square"),
            (r#"{"n":3,"entries":[["1","2"],["3","4"]]}"#, "declared"),
            (r#"{"n":1,"entries":[["x"]]}"#, "unknown"),
            (r#"{"n":1,"entries":[["1"]],"parameters":{"x":null}}"#, "appear"),
            (r#"{"n":1,"entries":[["x"]],"parameters":{"x":[[1,2]]}}"#, "occurrences"),
            (r#"{"n":1,"entries":[[true]]}"#, "string or a number"),
            (r#"{"n":1,"entries":[["1/0"]]}"#, "(1,1)"),
            (r#"{"n":0,"entries":[]}"#, "no rows"),
        ];
        for (text, needle) in cases {
            let err = MatrixDocument::parse_json(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text}: {err}");
        }
        assert!(matches!(MatrixDocument::parse_csv("1,2\n3\n"), Err(DocError::Ragged { .. })));
        assert!(matches!(MatrixDocument::parse_csv("1,2\n"), Err(DocError::NotSquare { .. })));
        assert!(matches!(MatrixDocument::parse_csv("1,2\n3,zz!\n"), Err(DocError::Entry { .. })));
    }
}
