//! Matrix Market coordinate files and the plain one-value-per-line vector
//! format used for right-hand sides.
//!
//! Indices are 1-based on disk and 0-based in memory. `symmetric` files are
//! expanded to full storage on read; duplicate entries are summed and
//! explicit zeros dropped.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::SparseMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_matrix_market(&text).map_err(|(line, message)| Error::parse(path, line, message))
}

/// Parses Matrix Market text. Errors carry the 1-based line number.
pub fn parse_matrix_market(text: &str) -> std::result::Result<SparseMatrix, (usize, String)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or((1, "empty file".to_string()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err((1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'".into()));
    }
    if tokens[2] != "coordinate" {
        return Err((1, format!("unsupported format '{}'", tokens[2])));
    }
    let pattern = match tokens[3].as_str() {
        "real" | "integer" | "double" => false,
        "pattern" => true,
        other => return Err((1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err((1, format!("unsupported symmetry '{other}'"))),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data.next().ok_or((1, "missing size line".to_string()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| (size_line, format!("bad size line: {e}")))?;
    if dims.len() != 3 {
        return Err((size_line, "size line must hold 'rows cols entries'".into()));
    }
    let (nrows, ncols, nnz) = (dims[0], dims[1], dims[2]);
    if symmetry == Symmetry::Symmetric && nrows != ncols {
        return Err((size_line, "symmetric matrix must be square".into()));
    }

    let mut triplets = Vec::with_capacity(if symmetry == Symmetry::Symmetric { 2 * nnz } else { nnz });
    let mut count = 0;
    for (ln, line) in data {
        let mut it = line.split_whitespace();
        let mut index = |what: &str, dim: usize| -> std::result::Result<usize, (usize, String)> {
            let t = it.next().ok_or((ln, format!("missing {what} index")))?;
            let i: usize = t.parse().map_err(|_| (ln, format!("bad {what} index '{t}'")))?;
            if i == 0 || i > dim {
                return Err((ln, format!("{what} index {i} outside 1..={dim}")));
            }
            Ok(i - 1)
        };
        let r = index("row", nrows)?;
        let c = index("column", ncols)?;
        let v = if pattern {
            1.0
        } else {
            let t = it.next().ok_or((ln, "missing value".to_string()))?;
            t.parse::<f64>().map_err(|_| (ln, format!("bad value '{t}'")))?
        };
        count += 1;
        if count > nnz {
            return Err((ln, format!("more entries than the declared {nnz}")));
        }
        triplets.push((r, c, v));
        if symmetry == Symmetry::Symmetric && r != c {
            triplets.push((c, r, v));
        }
    }
    if count != nnz {
        return Err((0, format!("declared {nnz} entries, found {count}")));
    }
    SparseMatrix::from_triplets(nrows, ncols, triplets).map_err(|e| (0, e.to_string()))
}

/// Formats `a` as Matrix Market text. With [`Symmetry::Symmetric`] only the
/// lower triangle is written and `a` must be symmetric.
pub fn format_matrix_market(a: &SparseMatrix, symmetry: Symmetry) -> Result<String> {
    if symmetry == Symmetry::Symmetric && !a.is_symmetric() {
        return Err(Error::InvalidInput("matrix is not symmetric".into()));
    }
    let entries: Vec<(usize, usize, f64)> = match symmetry {
        Symmetry::General => a.triplets().collect(),
        Symmetry::Symmetric => a.triplets().filter(|&(r, c, _)| c <= r).collect(),
    };
    let kind = match symmetry {
        Symmetry::General => "general",
        Symmetry::Symmetric => "symmetric",
    };
    let mut out = String::new();
    writeln!(out, "%%MatrixMarket matrix coordinate real {kind}").unwrap();
    writeln!(out, "{} {} {}", a.nrows(), a.ncols(), entries.len()).unwrap();
    for (r, c, v) in entries {
        // `{:e}` on f64 prints the shortest representation that round-trips
        writeln!(out, "{} {} {:e}", r + 1, c + 1, v).unwrap();
    }
    Ok(out)
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &SparseMatrix, symmetry: Symmetry) -> Result<()> {
    fs::write(path, format_matrix_market(a, symmetry)?)?;
    Ok(())
}

/// Reads a vector stored one value per line. Blank lines and `%`/`#`
/// comments are skipped.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
            continue;
        }
        out.push(
            t.parse::<f64>()
                .map_err(|_| Error::parse(path, i + 1, format!("bad value '{t}'")))?,
        );
    }
    Ok(out)
}

pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(v.len() * 24);
    for x in v {
        writeln!(out, "{x:e}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}
