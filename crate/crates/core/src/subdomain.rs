//! Per-subdomain setup: the local normal matrix `C_ii`, its SPSD splitting
//! `C̃_ii`, their factorizations and the local coarse vectors `Zᵢ` from the
//! shifted generalized eigenproblem
//!
//! ```text
//! Dᵢ C_ii Dᵢ v = λ (C̃_ii + s I) v,   s = 1e-8 ‖C̃_ii‖_F.
//! ```

use std::time::{Duration, Instant};

use nalgebra::SymmetricEigen;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::sparse::{Cholesky, DenseMatrix, SparseMatrix};

/// Relative GEVP shift, `s = GEVP_SHIFT · ‖C̃_ii‖_F`.
pub const GEVP_SHIFT: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SubdomainData {
    pub index: usize,
    /// `A(:, Ωᵢ)ᵀ A(:, Ωᵢ)`.
    pub c_ii: DenseMatrix,
    /// `A(rowsᵢ, Ωᵢ)ᵀ A(rowsᵢ, Ωᵢ)`.
    pub c_tilde_ii: DenseMatrix,
    /// Factor of `C_ii` plus the global construction shift.
    pub factor: Cholesky,
    pub kappa_estimate: f64,
    /// Selected eigenpairs; empty for one-level setups.
    pub eigen: LocalEigenpairs,
    pub eigensolve_time: Duration,
}

impl SubdomainData {
    /// Assembles, factors and (when `gevp` is given) solves the local
    /// eigenproblem for subdomain `i`.
    pub fn setup(
        a: &SparseMatrix,
        decomposition: &Decomposition,
        i: usize,
        global_shift: f64,
        gevp: Option<GevpParams>,
    ) -> Result<Self> {
        let omega = decomposition.overlapping(i);
        let (c_ii, c_tilde_ii) = assemble_local(a, omega, decomposition.rows(i))?;
        let factor = factor_spd(&c_ii, global_shift).map_err(|e| e.in_block(i))?;
        let kappa_estimate = factor.condition_estimate();
        let start = Instant::now();
        let eigen = match gevp {
            Some(p) => solve_local_gevp(
                decomposition.weights(i),
                &c_ii,
                &c_tilde_ii,
                p.tau,
                p.cap,
                f64::EPSILON,
                kappa_estimate,
            )
            .map_err(|e| e.in_block(i))?,
            None => LocalEigenpairs::empty(omega.len()),
        };
        Ok(Self {
            index: i,
            c_ii,
            c_tilde_ii,
            factor,
            kappa_estimate,
            eigen,
            eigensolve_time: start.elapsed(),
        })
    }

    pub fn dim(&self) -> usize {
        self.c_ii.nrows()
    }

    /// Number of selected coarse vectors `pᵢ`.
    pub fn num_coarse(&self) -> usize {
        self.eigen.z.ncols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevpParams {
    pub tau: f64,
    pub cap: usize,
}

/// `(C_ii, C̃_ii)` for the overlapping set `omega` and row set `rows`.
///
/// `C_ii` sums over every row of `A` touching `omega`, `C̃_ii` only over
/// `rows`, so `C_ii − C̃_ii` is a sum of rank-one SPSD terms.
pub fn assemble_local(a: &SparseMatrix, omega: &[usize], rows: &[usize]) -> Result<(DenseMatrix, DenseMatrix)> {
    let mut in_omega = vec![false; a.ncols()];
    for &c in omega {
        if c >= a.ncols() {
            return Err(Error::IndexOutOfRange { index: c, dim: a.ncols() });
        }
        in_omega[c] = true;
    }
    let touching: Vec<usize> = (0..a.nrows())
        .filter(|&r| a.row(r).0.iter().any(|&c| in_omega[c]))
        .collect();
    let c_ii = a.extract_submatrix(&touching, omega)?.dense_gram();
    let c_tilde = a.extract_submatrix(rows, omega)?.dense_gram();
    Ok((c_ii, c_tilde))
}

/// Cholesky factorization of `m + shift·I`.
pub fn factor_spd(m: &DenseMatrix, shift: f64) -> Result<Cholesky> {
    Cholesky::factor(m, shift)
}

/// `C_ii⁻¹ v` through the stored factor.
pub fn local_solve(data: &SubdomainData, v: &[f64]) -> Vec<f64> {
    data.factor.solve(v)
}

/// Selected eigenpairs of the local pencil.
#[derive(Debug, Clone)]
pub struct LocalEigenpairs {
    /// Selected eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Matching `(C̃_ii + sI)`-orthonormal eigenvectors as columns.
    pub z: DenseMatrix,
    /// Every eigenvalue of the pencil, descending.
    pub spectrum: Vec<f64>,
    pub shift: f64,
    pub threshold: f64,
}

impl LocalEigenpairs {
    fn empty(dim: usize) -> Self {
        Self {
            eigenvalues: Vec::new(),
            z: DenseMatrix::zeros(dim, 0),
            spectrum: Vec::new(),
            shift: 0.0,
            threshold: f64::INFINITY,
        }
    }
}

/// Solves `D C_ii D v = λ (C̃_ii + s I) v` densely and keeps the eigenpairs
/// with `λ ≥ min(1/τ, 1/(κ ε))`, largest first, at most `cap` of them.
///
/// The pencil is reduced to standard form with the Cholesky factor `L` of
/// `C̃_ii + sI`: `L⁻¹ D C_ii D L⁻ᵀ y = λ y`, `v = L⁻ᵀ y`. If that factor
/// breaks down, `s` is raised tenfold once before giving up.
pub fn solve_local_gevp(
    weights: &[f64],
    c_ii: &DenseMatrix,
    c_tilde_ii: &DenseMatrix,
    tau: f64,
    cap: usize,
    machine_eps: f64,
    kappa_estimate: f64,
) -> Result<LocalEigenpairs> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidInput(format!("threshold tau must be positive, got {tau}")));
    }
    let n = c_ii.nrows();
    if weights.len() != n || c_tilde_ii.nrows() != n {
        return Err(Error::DimensionMismatch {
            context: "local eigenproblem blocks",
            expected: n,
            found: weights.len().min(c_tilde_ii.nrows()),
        });
    }
    let mut shift = GEVP_SHIFT * c_tilde_ii.frobenius_norm();
    let factor = match Cholesky::factor(c_tilde_ii, shift) {
        Ok(f) => f,
        Err(_) => {
            shift *= 10.0;
            Cholesky::factor(c_tilde_ii, shift)?
        }
    };

    // K = D C D, then S = L⁻¹ K L⁻ᵀ
    let mut k = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            k[(i, j)] = weights[i] * c_ii[(i, j)] * weights[j];
        }
    }
    for j in 0..n {
        factor.forward_in_place(k.column_mut(j));
    }
    let mut s = k.transpose();
    for j in 0..n {
        factor.forward_in_place(s.column_mut(j));
    }
    let mut sym = nalgebra::DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            sym[(i, j)] = 0.5 * (s[(i, j)] + s[(j, i)]);
        }
    }
    let eig = SymmetricEigen::try_new(sym, machine_eps, 100 * n.max(10)).ok_or_else(|| Error::Eigensolver {
        subdomain: None,
        reason: "symmetric QR iteration did not converge".into(),
    })?;

    let mut order: Vec<usize> = (0..n).collect();
    // descending, ties by the solver's index
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let spectrum: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();

    let threshold = (1.0 / tau).min(1.0 / (kappa_estimate * machine_eps));
    let selected: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&j| eig.eigenvalues[j] >= threshold)
        .take(cap)
        .collect();
    let mut z = DenseMatrix::zeros(n, selected.len());
    for (col, &j) in selected.iter().enumerate() {
        let out = z.column_mut(col);
        out.copy_from_slice(eig.eigenvectors.column(j).as_slice());
        factor.backward_in_place(out);
    }
    Ok(LocalEigenpairs {
        eigenvalues: selected.iter().map(|&j| eig.eigenvalues[j]).collect(),
        z,
        spectrum,
        shift,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::problems::{random_sparse, random_vector, worked_example};

    fn to_mat(d: &DenseMatrix) -> oracle::Mat {
        d.to_rows()
    }

    fn paper_blocks() -> (DenseMatrix, DenseMatrix) {
        assemble_local(&worked_example(), &[0, 2, 1], &[0, 1, 2]).unwrap()
    }

    #[test]
    fn worked_example_local_blocks() {
        let (c, ct) = paper_blocks();
        assert_eq!(
            c.to_rows(),
            vec![vec![14.0, 6.0, 8.0], vec![6.0, 36.0, 0.0], vec![8.0, 0.0, 41.0]]
        );
        assert_eq!(
            ct.to_rows(),
            vec![vec![14.0, 6.0, 8.0], vec![6.0, 36.0, 0.0], vec![8.0, 0.0, 16.0]]
        );
        // the dropped row 4 of A contributes 5² to column 2's diagonal
        let a = worked_example();
        let dense = a.to_dense().to_rows();
        let sub: oracle::Mat = dense.iter().map(|r| vec![r[0], r[2], r[1]]).collect();
        assert_eq!(oracle::gram(&sub), c.to_rows());
    }

    #[test]
    fn no_boundary_means_identical_blocks() {
        let a = SparseMatrix::from_dense_rows(&[vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 3.0]]).unwrap();
        let (c, ct) = assemble_local(&a, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(c, ct);
    }

    #[test]
    fn splitting_difference_is_psd_on_random_blocks() {
        for seed in 0..4 {
            let a = random_sparse(70, 40, 3, seed);
            let c = a.normal_matrix().unwrap();
            let d = Decomposition::from_matrix(&a, &c, 4, seed).unwrap();
            for i in 0..4 {
                let (cii, ct) = assemble_local(&a, d.overlapping(i), d.rows(i)).unwrap();
                let mut diff = to_mat(&cii);
                let ctm = to_mat(&ct);
                for r in 0..diff.len() {
                    for s in 0..diff.len() {
                        diff[r][s] -= ctm[r][s];
                    }
                }
                let min = oracle::symmetric_eigenvalues(&diff)[0];
                assert!(min >= -1e-12 * cii.frobenius_norm(), "min eig {min}");
                assert!(cii.is_symmetric(0.0) && ct.is_symmetric(0.0));
            }
        }
    }

    #[test]
    fn local_solve_matches_inverse() {
        let (c, _) = paper_blocks();
        let f = factor_spd(&c, 0.0).unwrap();
        let inv = oracle::inverse(&to_mat(&c));
        let x = f.solve(&[1.0, 0.0, 0.0]);
        for i in 0..3 {
            assert!((x[i] - inv[i][0]).abs() <= 1e-12 * inv[i][0].abs().max(1e-2));
        }
    }

    #[test]
    fn local_solve_residual_on_random_spd() {
        let a = random_sparse(40, 25, 3, 8);
        let c = a.dense_gram();
        let f = factor_spd(&c, 0.0).unwrap();
        let v = random_vector(25, 1);
        let u = f.solve(&v);
        let r: Vec<f64> = c.matvec(&u).iter().zip(&v).map(|(p, q)| p - q).collect();
        assert!(crate::sparse::norm2(&r) <= 1e-10 * crate::sparse::norm2(&v));
    }

    #[test]
    fn identical_pencil_sides_select_nothing_at_tau_06() {
        let (c, _) = paper_blocks();
        let eig = solve_local_gevp(&[1.0; 3], &c, &c, 0.6, 300, f64::EPSILON, 10.0).unwrap();
        assert!(eig.z.ncols() == 0);
        for l in &eig.spectrum {
            assert!((l - 1.0).abs() < 1e-6, "{l}");
        }
    }

    #[test]
    fn tiny_tau_selects_nothing() {
        let (c, ct) = paper_blocks();
        let eig = solve_local_gevp(&[1.0, 1.0, 0.0], &c, &ct, 1e-30, 300, f64::EPSILON, 10.0).unwrap();
        assert_eq!(eig.z.ncols(), 0);
        assert!(solve_local_gevp(&[1.0; 3], &c, &ct, 0.0, 300, f64::EPSILON, 10.0).is_err());
    }

    #[test]
    fn worked_example_pencil_matches_oracle() {
        let (c, ct) = paper_blocks();
        let w = [1.0, 1.0, 0.0];
        let eig = solve_local_gevp(&w, &c, &ct, 0.6, 300, f64::EPSILON, 10.0).unwrap();
        let mut k = to_mat(&c);
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] *= w[i] * w[j];
            }
        }
        let mut b = to_mat(&ct);
        for (i, row) in b.iter_mut().enumerate() {
            row[i] += eig.shift;
        }
        let mut expect = oracle::generalized_eigenvalues(&k, &b);
        expect.reverse();
        for (g, e) in eig.spectrum.iter().zip(&expect) {
            assert!((g - e).abs() <= 1e-9 * e.abs().max(1.0), "{g} vs {e}");
        }
        let p = expect.iter().filter(|&&l| l >= 1.0 / 0.6).count();
        assert_eq!(eig.z.ncols(), p);
        assert_eq!(eig.shift, 1e-8 * ct.frobenius_norm());
    }

    #[test]
    fn eigenpairs_have_small_residuals_and_b_orthonormal() {
        let a = random_sparse(90, 60, 3, 2);
        let cm = a.normal_matrix().unwrap();
        let d = Decomposition::from_matrix(&a, &cm, 4, 2).unwrap();
        for i in 0..4 {
            let (c, ct) = assemble_local(&a, d.overlapping(i), d.rows(i)).unwrap();
            let w = d.weights(i);
            let eig = solve_local_gevp(w, &c, &ct, 0.6, 300, f64::EPSILON, 10.0).unwrap();
            let n = c.nrows();
            for (col, &lambda) in eig.eigenvalues.iter().enumerate() {
                let v = eig.z.column(col);
                let dv: Vec<f64> = v.iter().zip(w).map(|(x, y)| x * y).collect();
                let kv: Vec<f64> = c.matvec(&dv).iter().zip(w).map(|(x, y)| x * y).collect();
                let bv: Vec<f64> = ct.matvec(v).iter().zip(v).map(|(x, y)| x + eig.shift * y).collect();
                let res: f64 = (0..n).map(|r| (kv[r] - lambda * bv[r]).powi(2)).sum::<f64>().sqrt();
                assert!(res <= 1e-8 * lambda * crate::sparse::norm2(v), "residual {res}");
                let vbv = crate::sparse::dot(v, &bv);
                assert!((vbv - 1.0).abs() < 1e-8);
                assert!(lambda >= 1.0 / 0.6);
            }
            assert!(eig.eigenvalues.windows(2).all(|p| p[0] >= p[1]));
        }
    }

    #[test]
    fn boundary_null_space_is_never_selected() {
        // boundary column duplicated inside the boundary block: A_IΓ has a
        // null vector (0, 1, -1) supported on the boundary
        let a = SparseMatrix::from_dense_rows(&[
            vec![1.0, 1.0, 1.0, 0.0],
            vec![2.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.0, 3.0],
        ])
        .unwrap();
        let d = Decomposition::build(&a, vec![vec![0], vec![1, 2, 3]]).unwrap();
        assert_eq!(d.overlapping(0), &[0, 1, 2]);
        let (c, ct) = assemble_local(&a, d.overlapping(0), d.rows(0)).unwrap();
        let eig = solve_local_gevp(d.weights(0), &c, &ct, 0.6, 300, f64::EPSILON, 10.0).unwrap();
        for col in 0..eig.z.ncols() {
            let v = eig.z.column(col);
            // selected vectors carry interior weight
            assert!(v[0].abs() > 0.0);
        }
        // the pencil has only one nonzero eigenvalue: D zeroes the boundary
        let nonzero = eig.spectrum.iter().filter(|l| l.abs() > 1e-6).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn cap_truncates_largest_first() {
        let a = crate::problems::grid_least_squares(8, 9, 1);
        let cm = a.normal_matrix().unwrap();
        let d = Decomposition::from_matrix(&a, &cm, 4, 0).unwrap();
        let (c, ct) = assemble_local(&a, d.overlapping(0), d.rows(0)).unwrap();
        let all = solve_local_gevp(d.weights(0), &c, &ct, 10.0, 300, f64::EPSILON, 10.0).unwrap();
        let two = solve_local_gevp(d.weights(0), &c, &ct, 10.0, 2, f64::EPSILON, 10.0).unwrap();
        assert!(all.eigenvalues.len() > 2);
        assert_eq!(two.eigenvalues, all.eigenvalues[..2].to_vec());
    }
}
