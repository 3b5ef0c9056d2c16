//! MatrixMarket reader and writer for dense real matrices.
//!
//! Supported headers are `%%MatrixMarket matrix array|coordinate
//! real|integer general`. Coordinate entries not listed are zero and
//! duplicates are summed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use lse_cond::{DenseMatrix, DenseVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MtxError {
    #[error("{path}: {source}")]
    Io { path: String, source: IoMessage },
    #[error("line {line}: malformed header: {detail}")]
    MalformedHeader { line: usize, detail: String },
    #[error("line {line}: field `{field}` is not real (expected real or integer)")]
    NonRealField { line: usize, field: String },
    #[error("line {line}: unsupported {what} `{value}`")]
    Unsupported {
        line: usize,
        what: &'static str,
        value: String,
    },
    #[error("line {line}: bad size line: {detail}")]
    BadSize { line: usize, detail: String },
    #[error("line {line}: bad entry: {detail}")]
    BadEntry { line: usize, detail: String },
    #[error("line {line}: index ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    OutOfBounds {
        line: usize,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("{rows}x{cols} matrix is not a vector")]
    NotAVector { rows: usize, cols: usize },
}

/// `std::io::Error` is neither `Clone` nor `PartialEq`; keep its message.
#[derive(Debug, Error, PartialEq)]
#[error("{0}")]
pub struct IoMessage(pub String);

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Array,
    Coordinate,
}

pub fn parse_matrix_file(path: &Path) -> Result<DenseMatrix<f64>, MtxError> {
    let text = fs::read_to_string(path).map_err(|e| MtxError::Io {
        path: path.display().to_string(),
        source: IoMessage(e.to_string()),
    })?;
    parse_matrix(&text)
}

/// Reads a file holding an `n x 1` or `1 x n` matrix.
pub fn parse_vector_file(path: &Path) -> Result<DenseVector<f64>, MtxError> {
    to_vector(parse_matrix_file(path)?)
}

pub fn to_vector(m: DenseMatrix<f64>) -> Result<DenseVector<f64>, MtxError> {
    let (rows, cols) = m.shape();
    if cols == 1 || rows == 1 || rows * cols == 0 {
        Ok(DenseVector::from(m.as_slice().to_vec()))
    } else {
        Err(MtxError::NotAVector { rows, cols })
    }
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix<f64>, MtxError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or(MtxError::MalformedHeader {
        line: 1,
        detail: "empty file".into(),
    })?;
    let layout = parse_header(hline, header)?;

    let mut content = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = content.next().ok_or(MtxError::BadSize {
        line: hline + 1,
        detail: "missing size line".into(),
    })?;
    let dims = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| MtxError::BadSize {
            line: sline,
            detail: e.to_string(),
        })?;

    match layout {
        Layout::Array => {
            let [rows, cols] = dims[..] else {
                return Err(MtxError::BadSize {
                    line: sline,
                    detail: format!("expected `rows cols`, got `{}`", size.trim()),
                });
            };
            let mut data = Vec::with_capacity(rows * cols);
            for (line, l) in content {
                for tok in l.split_whitespace() {
                    if data.len() == rows * cols {
                        return Err(MtxError::BadEntry {
                            line,
                            detail: format!("more than the declared {} values", rows * cols),
                        });
                    }
                    data.push(parse_value(line, tok)?);
                }
            }
            if data.len() != rows * cols {
                return Err(MtxError::EntryCount {
                    expected: rows * cols,
                    found: data.len(),
                });
            }
            DenseMatrix::from_col_major(rows, cols, data).map_err(|e| MtxError::BadEntry {
                line: sline,
                detail: e.to_string(),
            })
        }
        Layout::Coordinate => {
            let [rows, cols, nnz] = dims[..] else {
                return Err(MtxError::BadSize {
                    line: sline,
                    detail: format!("expected `rows cols entries`, got `{}`", size.trim()),
                });
            };
            let mut m = DenseMatrix::zeros(rows, cols);
            let mut found = 0;
            for (line, l) in content {
                let toks: Vec<&str> = l.split_whitespace().collect();
                let [i, j, v] = toks[..] else {
                    return Err(MtxError::BadEntry {
                        line,
                        detail: format!("expected `row col value`, got `{}`", l.trim()),
                    });
                };
                let index = |t: &str| {
                    t.parse::<usize>().map_err(|e| MtxError::BadEntry {
                        line,
                        detail: format!("index `{t}`: {e}"),
                    })
                };
                let (row, col) = (index(i)?, index(j)?);
                if row == 0 || col == 0 || row > rows || col > cols {
                    return Err(MtxError::OutOfBounds { line, row, col, rows, cols });
                }
                m[(row - 1, col - 1)] += parse_value(line, v)?;
                found += 1;
            }
            if found != nnz {
                return Err(MtxError::EntryCount {
                    expected: nnz,
                    found,
                });
            }
            Ok(m)
        }
    }
}

fn parse_header(line: usize, header: &str) -> Result<Layout, MtxError> {
    let toks: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" {
        return Err(MtxError::MalformedHeader {
            line,
            detail: format!(
                "expected `%%MatrixMarket matrix <format> <field> <symmetry>`, got `{}`",
                header.trim()
            ),
        });
    }
    if toks[1] != "matrix" {
        return Err(MtxError::Unsupported { line, what: "object", value: toks[1].clone() });
    }
    let layout = match toks[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(MtxError::Unsupported { line, what: "format", value: other.into() }),
    };
    match toks[3].as_str() {
        "real" | "integer" => {}
        other => return Err(MtxError::NonRealField { line, field: other.into() }),
    }
    if toks[4] != "general" {
        return Err(MtxError::Unsupported { line, what: "symmetry", value: toks[4].clone() });
    }
    Ok(layout)
}

fn parse_value(line: usize, tok: &str) -> Result<f64, MtxError> {
    let v: f64 = tok.parse().map_err(|_| MtxError::BadEntry {
        line,
        detail: format!("`{tok}` is not a number"),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(MtxError::BadEntry {
            line,
            detail: format!("`{tok}` is not finite"),
        })
    }
}

/// Array-format text. Values use the shortest representation that parses
/// back to the same `f64`.
pub fn write_matrix(m: &DenseMatrix<f64>) -> String {
    let mut out = String::from("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for v in m.as_slice() {
        let _ = writeln!(out, "{v:e}");
    }
    out
}

pub fn write_vector(v: &[f64]) -> String {
    write_matrix(&DenseMatrix::from_fn(v.len(), 1, |i, _| v[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_is_column_major() {
        let m = parse_matrix("%%MatrixMarket matrix array real general\n% c\n2 2\n1\n3\n2\n4\n").unwrap();
        assert_eq!(m, DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]));
    }

    #[test]
    fn coordinate_expands_to_dense() {
        let text = "%%MatrixMarket matrix coordinate real general\n9 4 4\n1 1 1\n3 2 1\n7 3 1e-3\n9 4 1e-3\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.shape(), (9, 4));
        assert_eq!(m[(6, 2)], 1e-3);
        assert_eq!(m.as_slice().iter().filter(|v| **v != 0.0).count(), 4);
    }

    #[test]
    fn integer_field_is_accepted() {
        let m = parse_matrix("%%MatrixMarket matrix array integer general\n1 2\n3\n-4\n").unwrap();
        assert_eq!(m.as_slice(), &[3.0, -4.0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_matrix("%%MatrixMarket matrix array complex general\n1 1\n1 0\n").unwrap_err();
        assert_eq!(e, MtxError::NonRealField { line: 1, field: "complex".into() });

        let e = parse_matrix("%%MatrixMarket matrx\n").unwrap_err();
        assert!(matches!(e, MtxError::MalformedHeader { line: 1, .. }));

        let e = parse_matrix("%%MatrixMarket matrix coordinate real general\n2 2 1\n\n3 1 1.0\n").unwrap_err();
        assert!(matches!(e, MtxError::OutOfBounds { line: 4, row: 3, .. }));

        let e = parse_matrix("%%MatrixMarket matrix array real general\n2 1\n1\nx\n").unwrap_err();
        assert!(matches!(e, MtxError::BadEntry { line: 4, .. }));

        let e = parse_matrix("%%MatrixMarket matrix array real general\n2 1\n1\n").unwrap_err();
        assert_eq!(e, MtxError::EntryCount { expected: 2, found: 1 });

        let e = parse_matrix("%%MatrixMarket matrix array real symmetric\n1 1\n1\n").unwrap_err();
        assert!(matches!(e, MtxError::Unsupported { what: "symmetry", .. }));
    }

    #[test]
    fn round_trip() {
        let m = DenseMatrix::from_rows(&[[0.1, -2.5e-17], [1.0 / 3.0, 12345.678]]);
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        let v = [1.0, f64::MIN_POSITIVE, -7.25];
        assert_eq!(&to_vector(parse_matrix(&write_vector(&v)).unwrap()).unwrap()[..], &v[..]);
    }

    #[test]
    fn vectors_must_have_one_dimension() {
        let m = DenseMatrix::<f64>::zeros(2, 2);
        assert_eq!(to_vector(m), Err(MtxError::NotAVector { rows: 2, cols: 2 }));
    }
}
