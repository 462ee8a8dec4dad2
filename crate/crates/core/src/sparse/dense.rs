use std::ops::{Index, IndexMut};

use crate::error::{check_len, Error, Result};

/// Small dense matrix, column-major. Holds the local blocks `C_ii`, `C̃_ii`,
/// eigenvector blocks and the coarse operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            values: vec![0.0; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_column_major(nrows: usize, ncols: usize, values: Vec<f64>) -> Result<Self> {
        check_len("dense values", nrows * ncols, values.len())?;
        Ok(Self { nrows, ncols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            check_len("dense row length", ncols, row.len())?;
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.nrows)
            .map(|i| (0..self.ncols).map(|j| self[(i, j)]).collect())
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.values[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for j in 0..self.ncols {
            for i in 0..self.nrows {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (yi, aij) in y.iter_mut().zip(self.column(j)) {
                    *yi += aij * xj;
                }
            }
        }
        y
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = DenseMatrix::zeros(self.nrows, other.ncols);
        for j in 0..other.ncols {
            let col = self.matvec(other.column(j));
            out.column_mut(j).copy_from_slice(&col);
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.nrows.min(self.ncols)).map(|i| self[(i, i)]).sum()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.nrows == self.ncols
            && (0..self.nrows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_column_slice(self.nrows, self.ncols, &self.values)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        Self {
            nrows: m.nrows(),
            ncols: m.ncols(),
            values: m.as_slice().to_vec(),
        }
    }

    /// Keeps the listed columns in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.nrows, cols.len());
        for (k, &j) in cols.iter().enumerate() {
            out.column_mut(k).copy_from_slice(self.column(j));
        }
        out
    }

    /// Principal submatrix on the listed indices.
    pub fn principal(&self, idx: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(idx.len(), idx.len());
        for (b, &j) in idx.iter().enumerate() {
            for (a, &i) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.values[j * self.nrows + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.values[j * self.nrows + i]
    }
}

/// Cholesky factor `M + shift·I = L Lᵀ` of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DenseMatrix,
    shift: f64,
}

impl Cholesky {
    /// Factors `m + shift·I`. Only the lower triangle of `m` is read.
    ///
    /// A pivot that is not strictly positive (or not finite) is reported as
    /// [`Error::Factorization`] with its position.
    pub fn factor(m: &DenseMatrix, shift: f64) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "Cholesky input must be square",
                expected: n,
                found: m.ncols(),
            });
        }
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            for i in j..n {
                l[(i, j)] = m[(i, j)];
            }
            l[(j, j)] += shift;
        }
        // left-looking column Cholesky
        for j in 0..n {
            for k in 0..j {
                let ljk = l[(j, k)];
                if ljk != 0.0 {
                    for i in j..n {
                        l[(i, j)] -= l[(i, k)] * ljk;
                    }
                }
            }
            let d = l[(j, j)];
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::Factorization {
                    block: None,
                    pivot: j,
                    value: d,
                });
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                l[(i, j)] /= d;
            }
            for i in 0..j {
                l[(i, j)] = 0.0;
            }
        }
        Ok(Self { l, shift })
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn lower(&self) -> &DenseMatrix {
        &self.l
    }

    /// Diagonal of `L`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.l[(i, i)]).collect()
    }

    /// Solves `L y = b` in place.
    pub fn forward_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        for j in 0..n {
            b[j] /= self.l[(j, j)];
            let bj = b[j];
            if bj != 0.0 {
                let col = self.l.column(j);
                for i in j + 1..n {
                    b[i] -= col[i] * bj;
                }
            }
        }
    }

    /// Solves `Lᵀ x = y` in place.
    pub fn backward_in_place(&self, y: &mut [f64]) {
        let n = self.dim();
        for j in (0..n).rev() {
            let col = self.l.column(j);
            let s: f64 = (j + 1..n).map(|i| col[i] * y[i]).sum();
            y[j] = (y[j] - s) / col[j];
        }
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        self.forward_in_place(b);
        self.backward_in_place(b);
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Ratio of largest to smallest squared diagonal entry of `L`, a cheap
    /// order-of-magnitude condition estimate.
    pub fn condition_estimate(&self) -> f64 {
        let d2: Vec<f64> = self.diagonal().iter().map(|d| d * d).collect();
        let max = d2.iter().cloned().fold(0.0, f64::max);
        let min = d2.iter().cloned().fold(f64::INFINITY, f64::min);
        if d2.is_empty() {
            1.0
        } else {
            max / min
        }
    }
}

/// Diagonally pivoted Cholesky used as a rank filter: returns the indices
/// (ascending) whose pivots stay above `tol` when greedily eliminating the
/// largest remaining diagonal entry first.
pub fn pivoted_cholesky_keep(m: &DenseMatrix, tol: f64) -> Vec<usize> {
    let n = m.nrows();
    let mut work = m.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut kept = Vec::new();
    while !remaining.is_empty() {
        let (pos, &p) = remaining
            .iter()
            .enumerate()
            .max_by(|a, b| work[(*a.1, *a.1)].total_cmp(&work[(*b.1, *b.1)]).then(b.1.cmp(a.1)))
            .expect("nonempty");
        let d = work[(p, p)];
        if d.is_nan() || d <= tol {
            break;
        }
        remaining.swap_remove(pos);
        kept.push(p);
        // Schur complement update on the remaining indices
        let col: Vec<f64> = remaining.iter().map(|&i| work[(i, p)]).collect();
        for (a, &i) in remaining.iter().enumerate() {
            for (b, &j) in remaining.iter().enumerate() {
                work[(i, j)] -= col[a] * col[b] / d;
            }
        }
    }
    kept.sort_unstable();
    kept
}
