//! Second level: the coarse basis `R₀ᵀ = [R₁ᵀD₁Z₁, …, R_NᵀD_NZ_N]` and the
//! Galerkin operator `C₀₀ = (A R₀ᵀ)ᵀ (A R₀ᵀ)`.

use serde::Serialize;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::sparse::{dense::pivoted_cholesky_keep, Cholesky, DenseMatrix, SparseMatrix};
use crate::subdomain::SubdomainData;

/// Relative pivot tolerance of the rank filter, scaled by `trace(C₀₀)/n₀`.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Assembled coarse basis before rank filtering.
#[derive(Debug, Clone)]
pub struct CoarseBasis {
    /// `n × n₀` matrix whose columns are the scattered, weighted `Zᵢ` columns.
    pub basis: SparseMatrix,
    /// Subdomain each column came from.
    pub owners: Vec<usize>,
}

/// Concatenates `RᵢᵀDᵢZᵢ` over subdomains in order, dropping columns that
/// the weights zero out entirely.
pub fn assemble_coarse_basis(decomposition: &Decomposition, subdomains: &[SubdomainData]) -> CoarseBasis {
    let n = decomposition.n();
    let mut triplets = Vec::new();
    let mut owners = Vec::new();
    for sd in subdomains {
        let omega = decomposition.overlapping(sd.index);
        let w = decomposition.weights(sd.index);
        for j in 0..sd.eigen.z.ncols() {
            let col = owners.len();
            let before = triplets.len();
            for (k, &zk) in sd.eigen.z.column(j).iter().enumerate() {
                let v = w[k] * zk;
                if v != 0.0 {
                    triplets.push((omega[k], col, v));
                }
            }
            if triplets.len() > before {
                owners.push(sd.index);
            }
        }
    }
    let basis = SparseMatrix::from_triplets(n, owners.len(), triplets).expect("indices in range");
    CoarseBasis { basis, owners }
}

/// `(A B)ᵀ (A B) + shift · BᵀB` as a dense matrix.
pub fn coarse_operator(a: &SparseMatrix, basis: &SparseMatrix, shift: f64) -> Result<DenseMatrix> {
    let ab = a.matmul(basis)?;
    let mut c00 = ab.dense_gram();
    if shift != 0.0 {
        let btb = basis.dense_gram();
        for j in 0..c00.ncols() {
            for i in 0..c00.nrows() {
                c00[(i, j)] += shift * btb[(i, j)];
            }
        }
    }
    Ok(c00)
}

#[derive(Debug, Clone)]
pub struct CoarseSpace {
    basis: SparseMatrix,
    basis_t: SparseMatrix,
    factor: Cholesky,
    owners: Vec<usize>,
    dropped: Vec<usize>,
    shift: f64,
}

/// Summary of the rank filter for reports.
#[derive(Debug, Clone, Serialize)]
pub struct CoarseSummary {
    pub n0: usize,
    pub assembled: usize,
    pub dropped_columns: Vec<usize>,
}

impl CoarseSpace {
    pub fn n0(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &SparseMatrix {
        &self.basis
    }

    pub fn factor(&self) -> &Cholesky {
        &self.factor
    }

    /// Subdomain each kept column came from.
    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    /// Columns of the assembled basis removed by the rank filter.
    pub fn dropped(&self) -> &[usize] {
        &self.dropped
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn summary(&self) -> CoarseSummary {
        CoarseSummary {
            n0: self.n0(),
            assembled: self.n0() + self.dropped.len(),
            dropped_columns: self.dropped.clone(),
        }
    }

    /// `Q v = B C₀₀⁻¹ Bᵀ v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut coarse = vec![0.0; self.n0()];
        self.basis_t.spmv_into(v, &mut coarse);
        self.factor.solve_in_place(&mut coarse);
        let mut out = vec![0.0; self.basis.nrows()];
        self.basis.spmv_into(&coarse, &mut out);
        out
    }
}

/// Rank-filters the basis and factors `C₀₀` including the construction
/// shift `shift · BᵀB` (the Galerkin projection of `C + shift·I`).
pub fn factor_coarse(a: &SparseMatrix, assembled: &CoarseBasis, shift: f64) -> Result<CoarseSpace> {
    let n0 = assembled.basis.ncols();
    if n0 == 0 {
        return Err(Error::InvalidInput("coarse space is empty".into()));
    }
    let c00 = coarse_operator(a, &assembled.basis, shift)?;
    let tol = RANK_TOLERANCE * c00.trace() / n0 as f64;
    let keep = pivoted_cholesky_keep(&c00, tol);
    let (basis, c00, owners, dropped) = if keep.len() == n0 {
        (assembled.basis.clone(), c00, assembled.owners.clone(), Vec::new())
    } else {
        let rows: Vec<usize> = (0..assembled.basis.nrows()).collect();
        let dropped: Vec<usize> = (0..n0).filter(|j| keep.binary_search(j).is_err()).collect();
        log::warn!("coarse rank filter dropped {} of {n0} columns", dropped.len());
        (
            assembled.basis.extract_submatrix(&rows, &keep)?,
            c00.principal(&keep),
            keep.iter().map(|&j| assembled.owners[j]).collect(),
            dropped,
        )
    };
    if basis.ncols() == 0 {
        return Err(Error::CoarseFactorization { columns: (0..n0).collect() });
    }
    let factor = Cholesky::factor(&c00, 0.0).map_err(|e| match e {
        Error::Factorization { pivot, .. } => Error::CoarseFactorization {
            columns: vec![keep[pivot]],
        },
        other => other,
    })?;
    let basis_t = basis.transpose();
    Ok(CoarseSpace {
        basis,
        basis_t,
        factor,
        owners,
        dropped,
        shift,
    })
}
