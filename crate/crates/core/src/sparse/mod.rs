//! Compressed sparse row storage and the handful of kernels the
//! preconditioner needs: products with `A` and `Aᵀ`, the explicit normal
//! matrix `AᵀA`, order-preserving submatrix extraction and Matrix Market I/O.

pub(crate) mod dense;
pub mod mm;

pub use dense::{Cholesky, DenseMatrix};

use crate::error::{check_len, Error, Result};

/// Real sparse matrix in CSR layout.
///
/// Column indices are strictly increasing within a row and no explicit
/// zeros are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from raw CSR arrays, validating every storage invariant.
    pub fn try_from_csr(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_len("row offsets", nrows + 1, row_offsets.len())?;
        check_len("values", col_indices.len(), values.len())?;
        if row_offsets[0] != 0 || row_offsets[nrows] != col_indices.len() {
            return Err(Error::InvalidInput(
                "row offsets must start at 0 and end at the number of stored entries".into(),
            ));
        }
        for r in 0..nrows {
            let (lo, hi) = (row_offsets[r], row_offsets[r + 1]);
            if lo > hi {
                return Err(Error::InvalidInput(format!("row offsets decrease at row {r}")));
            }
            for k in lo..hi {
                if col_indices[k] >= ncols {
                    return Err(Error::IndexOutOfRange {
                        index: col_indices[k],
                        dim: ncols,
                    });
                }
                if k > lo && col_indices[k] <= col_indices[k - 1] {
                    return Err(Error::InvalidInput(format!(
                        "column indices not strictly increasing in row {r}"
                    )));
                }
                if values[k] == 0.0 {
                    return Err(Error::InvalidInput(format!("explicit zero stored in row {r}")));
                }
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed
    /// and entries that end up exactly zero are dropped.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            if r >= nrows {
                return Err(Error::IndexOutOfRange { index: r, dim: nrows });
            }
            if c >= ncols {
                return Err(Error::IndexOutOfRange { index: c, dim: ncols });
            }
            rows[r].push((c, v));
        }
        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for mut row in rows {
            // stable sort keeps duplicate summation order deterministic
            row.sort_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < row.len() {
                let c = row[k].0;
                let mut sum = 0.0;
                while k < row.len() && row[k].0 == c {
                    sum += row[k].1;
                    k += 1;
                }
                if sum != 0.0 {
                    col_indices.push(c);
                    values.push(sum);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from dense rows, skipping zeros.
    pub fn from_dense_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            check_len("dense row length", ncols, row.len())?;
            for (c, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(nrows, ncols, triplets)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_offsets: vec![0; nrows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[r]..self.row_offsets[r + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    /// Stored value at `(r, c)`, zero when absent.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    /// `y = A x`.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("spmv input", self.ncols, x.len())?;
        let mut y = vec![0.0; self.nrows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` without dimension checks beyond debug assertions.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (r, yr) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            *yr = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// `x = Aᵀ y`, computed by scattering rows; `Aᵀ` is never formed.
    pub fn spmv_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("spmv_transpose input", self.nrows, y.len())?;
        let mut x = vec![0.0; self.ncols];
        self.spmv_transpose_into(y, &mut x);
        Ok(x)
    }

    pub fn spmv_transpose_into(&self, y: &[f64], x: &mut [f64]) {
        debug_assert_eq!(y.len(), self.nrows);
        debug_assert_eq!(x.len(), self.ncols);
        x.iter_mut().for_each(|v| *v = 0.0);
        for (r, &yr) in y.iter().enumerate() {
            if yr == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                x[c] += v * yr;
            }
        }
    }

    /// Explicit transpose, i.e. the CSC view of `A` stored as CSR.
    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.ncols {
            counts[c + 1] += counts[c];
        }
        let row_offsets = counts.clone();
        let mut next = counts;
        let mut col_indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let k = next[c];
                col_indices[k] = r;
                values[k] = v;
                next[c] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Sparse product `self · other` with a dense accumulator per row.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        check_len("matmul inner dimension", self.ncols, other.nrows)?;
        let mut acc = vec![0.0; other.ncols];
        let mut mark = vec![usize::MAX; other.ncols];
        let mut pattern = Vec::new();
        let mut row_offsets = Vec::with_capacity(self.nrows + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for r in 0..self.nrows {
            pattern.clear();
            let (cols, vals) = self.row(r);
            for (&k, &a) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(k);
                for (&c, &b) in ocols.iter().zip(ovals) {
                    if mark[c] != r {
                        mark[c] = r;
                        acc[c] = 0.0;
                        pattern.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            pattern.sort_unstable();
            for &c in &pattern {
                if acc[c] != 0.0 {
                    col_indices.push(c);
                    values.push(acc[c]);
                }
            }
            row_offsets.push(col_indices.len());
        }
        Ok(SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Index of the first column without stored entries, if any.
    pub fn first_empty_column(&self) -> Option<usize> {
        let mut seen = vec![false; self.ncols];
        for &c in &self.col_indices {
            seen[c] = true;
        }
        seen.iter().position(|&s| !s)
    }

    /// Explicit normal equations matrix `C = AᵀA`.
    ///
    /// Rejects `A` with an empty column, since `C` would then be singular.
    pub fn normal_matrix(&self) -> Result<SparseMatrix> {
        if let Some(c) = self.first_empty_column() {
            return Err(Error::ZeroColumn(c));
        }
        self.transpose().matmul(self)
    }

    /// `A(rows, cols)`, with rows and columns in the order given.
    pub fn extract_submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<SparseMatrix> {
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            if c >= self.ncols {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    dim: self.ncols,
                });
            }
            if col_pos[c] != usize::MAX {
                return Err(Error::DuplicateIndex(c));
            }
            col_pos[c] = k;
        }
        let mut seen_row = vec![false; self.nrows];
        let mut row_offsets = Vec::with_capacity(rows.len() + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        let mut entries: Vec<(usize, f64)> = Vec::new();
        row_offsets.push(0);
        for &r in rows {
            if r >= self.nrows {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    dim: self.nrows,
                });
            }
            if std::mem::replace(&mut seen_row[r], true) {
                return Err(Error::DuplicateIndex(r));
            }
            entries.clear();
            let (rc, rv) = self.row(r);
            for (&c, &v) in rc.iter().zip(rv) {
                let p = col_pos[c];
                if p != usize::MAX {
                    entries.push((p, v));
                }
            }
            entries.sort_unstable_by_key(|e| e.0);
            for &(p, v) in &entries {
                col_indices.push(p);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        Ok(SparseMatrix {
            nrows: rows.len(),
            ncols: cols.len(),
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Whether the stored pattern and values are symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.nrows == self.ncols && self.triplets().all(|(r, c, v)| self.get(c, r) == v)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            d[(r, c)] = v;
        }
        d
    }

    /// Dense Gram matrix `AᵀA`, accumulated row by row.
    pub fn dense_gram(&self) -> DenseMatrix {
        let mut g = DenseMatrix::zeros(self.ncols, self.ncols);
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&ci, &vi) in cols.iter().zip(vals) {
                for (&cj, &vj) in cols.iter().zip(vals) {
                    g[(ci, cj)] += vi * vj;
                }
            }
        }
        g
    }
}

/// Dot product with sequential summation.
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
