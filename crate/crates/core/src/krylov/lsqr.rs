use super::{SolveReport, SolverOptions, StopReason};
use crate::error::{check_len, Result};
use crate::operator::LinearOperator;
use crate::sparse::{axpy, dot, norm2, SparseMatrix};

/// Left-preconditioned LSQR for `min ‖Ax − b‖` with an SPD preconditioner
/// `M ≈ (AᵀA)⁻¹` given only as an operator. Each iteration applies `A`,
/// `Aᵀ` and `M` once.
///
/// Iteration stops when
/// `‖M^{1/2}Aᵀr‖ / (‖A‖_{M,F} ‖r‖) < tol` or `‖r‖ ≤ tol ‖b‖`.
pub fn lsqr(
    a: &SparseMatrix,
    b: &[f64],
    m: &dyn LinearOperator,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let (rows, n) = (a.nrows(), a.ncols());
    check_len("lsqr: right-hand side", rows, b.len())?;
    check_len("lsqr: preconditioner dimension", n, m.dim())?;

    let mut x = vec![0.0; n];
    let mut u = b.to_vec();
    let bnorm = norm2(b);
    let mut beta = bnorm;
    let mut residuals = vec![bnorm];
    let mut normals = Vec::new();
    let finish = |x: Vec<f64>, iterations, reason, residuals, normals, anorm| {
        let r: Vec<f64> = b.iter().zip(a.spmv(&x).expect("dimensions checked")).map(|(b, ax)| b - ax).collect();
        let report = SolveReport {
            iterations,
            stop_reason: reason,
            residual_history: residuals,
            normal_residual_history: normals,
            operator_norm_estimate: anorm,
            final_ls_residual: norm2(&r),
            final_normal_residual: norm2(&a.spmv_transpose(&r).expect("dimensions checked")),
        };
        Ok((x, report))
    };

    if beta == 0.0 {
        normals.push(0.0);
        return finish(x, 0, StopReason::Converged, residuals, normals, 0.0);
    }
    u.iter_mut().for_each(|e| *e /= beta);

    let mut t = vec![0.0; n];
    let mut q = vec![0.0; n];
    a.spmv_transpose_into(&u, &mut t);
    m.apply(&t, &mut q);
    let tq = dot(&t, &q);
    if !tq.is_finite() || tq < 0.0 {
        normals.push(f64::NAN);
        return finish(x, 0, StopReason::Breakdown, residuals, normals, 0.0);
    }
    let mut alpha = tq.sqrt();
    normals.push(alpha * beta);
    if alpha == 0.0 {
        return finish(x, 0, StopReason::Converged, residuals, normals, 0.0);
    }
    // s tracks Aᵀu-space, v the x-space direction M s.
    let mut s: Vec<f64> = t.iter().map(|e| e / alpha).collect();
    let mut v: Vec<f64> = q.iter().map(|e| e / alpha).collect();
    let mut w = v.clone();
    let mut phibar = beta;
    let mut rhobar = alpha;
    let mut anorm2 = alpha * alpha;
    let mut av = vec![0.0; rows];

    for k in 1..=opts.max_iterations {
        a.spmv_into(&v, &mut av);
        for (ui, avi) in u.iter_mut().zip(&av) {
            *ui = avi - alpha * *ui;
        }
        beta = norm2(&u);
        if beta > 0.0 {
            u.iter_mut().for_each(|e| *e /= beta);
            a.spmv_transpose_into(&u, &mut t);
            axpy(-beta, &s, &mut t);
            m.apply(&t, &mut q);
            let tq = dot(&t, &q);
            if !tq.is_finite() || tq < 0.0 {
                return finish(x, k - 1, StopReason::Breakdown, residuals, normals, anorm2.sqrt());
            }
            alpha = tq.sqrt();
            if alpha > 0.0 {
                for ((si, vi), (ti, qi)) in s.iter_mut().zip(v.iter_mut()).zip(t.iter().zip(&q)) {
                    *si = ti / alpha;
                    *vi = qi / alpha;
                }
            }
        } else {
            alpha = 0.0;
        }
        anorm2 += alpha * alpha + beta * beta;

        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let sn = beta / rho;
        let theta = sn * alpha;
        rhobar = -c * alpha;
        let phi = c * phibar;
        phibar *= sn;

        axpy(phi / rho, &w, &mut x);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi = vi - (theta / rho) * *wi;
        }

        let anorm = anorm2.sqrt();
        let normal = phibar * alpha * c.abs();
        residuals.push(phibar);
        normals.push(normal);
        if !phibar.is_finite() || !normal.is_finite() || x.iter().any(|e| !e.is_finite()) {
            return finish(x, k, StopReason::Breakdown, residuals, normals, anorm);
        }
        let ratio = if phibar > 0.0 { alpha * c.abs() / anorm } else { 0.0 };
        if ratio < opts.tol || phibar <= opts.tol * bnorm || alpha == 0.0 || beta == 0.0 {
            return finish(x, k, StopReason::Converged, residuals, normals, anorm);
        }
    }
    let anorm = anorm2.sqrt();
    finish(x, opts.max_iterations, StopReason::MaxIterations, residuals, normals, anorm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{FnOperator, Identity};
    use crate::oracle;
    use crate::problems::{random_sparse, random_vector};
    use proptest::prelude::*;

    /// Unpreconditioned LSQR written straight from the bidiagonalization
    /// recurrences, returning the iterate after `steps` steps.
    fn reference_lsqr(a: &oracle::Mat, b: &[f64], steps: usize) -> Vec<f64> {
        let at = oracle::transpose(a);
        let n = at.len();
        let norm = |v: &[f64]| v.iter().map(|e| e * e).sum::<f64>().sqrt();
        let mut beta = norm(b);
        let mut u: Vec<f64> = b.iter().map(|e| e / beta).collect();
        let mut v = oracle::matvec(&at, &u);
        let mut alpha = norm(&v);
        v.iter_mut().for_each(|e| *e /= alpha);
        let mut w = v.clone();
        let mut x = vec![0.0; n];
        let (mut phibar, mut rhobar) = (beta, alpha);
        for _ in 0..steps {
            let av = oracle::matvec(a, &v);
            u = av.iter().zip(&u).map(|(p, q)| p - alpha * q).collect();
            beta = norm(&u);
            u.iter_mut().for_each(|e| *e /= beta);
            let atu = oracle::matvec(&at, &u);
            v = atu.iter().zip(&v).map(|(p, q)| p - beta * q).collect();
            alpha = norm(&v);
            v.iter_mut().for_each(|e| *e /= alpha);
            let rho = (rhobar * rhobar + beta * beta).sqrt();
            let (c, s) = (rhobar / rho, beta / rho);
            let theta = s * alpha;
            rhobar = -c * alpha;
            let phi = c * phibar;
            phibar *= s;
            for i in 0..n {
                x[i] += phi / rho * w[i];
                w[i] = v[i] - theta / rho * w[i];
            }
        }
        x
    }

    #[test]
    fn identity_system_one_iteration() {
        let a = SparseMatrix::identity(4);
        let b = [1.0, 2.0, 3.0, 4.0];
        let (x, rep) = lsqr(&a, &b, &Identity(4), &SolverOptions::default()).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged());
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).abs() < 1e-14);
        }
        assert_eq!(rep.residual_history.len(), 2);
    }

    #[test]
    fn inconsistent_two_by_one() {
        let a = SparseMatrix::from_dense_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let (x, rep) = lsqr(&a, &[1.0, 0.0], &Identity(1), &SolverOptions::default()).unwrap();
        assert!(rep.converged());
        assert!((x[0] - 0.5).abs() < 1e-14);
        assert!((rep.final_ls_residual - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((rep.residual_history.last().unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zero_rhs_is_immediate() {
        let a = random_sparse(10, 5, 2, 1);
        let (x, rep) = lsqr(&a, &[0.0; 10], &Identity(5), &SolverOptions::default()).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.converged());
        assert!(x.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn matches_textbook_iterates() {
        for seed in 0..10 {
            let a = random_sparse(30, 12, 3, 100 + seed);
            let b = random_vector(30, 200 + seed);
            let dense = a.to_dense().to_rows();
            for steps in 1..=5 {
                let opts = SolverOptions {
                    tol: 0.0,
                    max_iterations: steps,
                    restart: 1,
                };
                let (x, rep) = lsqr(&a, &b, &Identity(12), &opts).unwrap();
                assert_eq!(rep.iterations, steps);
                let r = reference_lsqr(&dense, &b, steps);
                let scale = r.iter().fold(1.0f64, |m, e| m.max(e.abs()));
                for (p, q) in x.iter().zip(&r) {
                    assert!((p - q).abs() <= 1e-10 * scale, "seed {seed} step {steps}: {p} vs {q}");
                }
            }
        }
    }

    #[test]
    fn exact_inverse_preconditioner_converges_fast() {
        let a = random_sparse(40, 15, 3, 5);
        let b = random_vector(40, 6);
        let c = oracle::gram(&a.to_dense().to_rows());
        let cinv = oracle::inverse(&c);
        let m = FnOperator::new(15, |x: &[f64], y: &mut [f64]| y.copy_from_slice(&oracle::matvec(&cinv, x)));
        let (x, rep) = lsqr(&a, &b, &m, &SolverOptions::default()).unwrap();
        assert!(rep.converged());
        assert!(rep.iterations <= 3, "{} iterations", rep.iterations);
        let exact = oracle::cholesky_solve(&c, &oracle::matvec(&oracle::transpose(&a.to_dense().to_rows()), &b));
        for (p, q) in x.iter().zip(&exact) {
            assert!((p - q).abs() < 1e-8 * (1.0 + q.abs()));
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        let a = random_sparse(6, 3, 2, 1);
        assert!(lsqr(&a, &[1.0; 5], &Identity(3), &SolverOptions::default()).is_err());
        assert!(lsqr(&a, &[1.0; 6], &Identity(4), &SolverOptions::default()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn residual_norm_is_nonincreasing(seed in 0u64..10_000, cols in 3usize..20, extra in 0usize..20) {
            let rows = cols + extra;
            let a = random_sparse(rows, cols, 3, seed);
            let b = random_vector(rows, seed + 1);
            let opts = SolverOptions { tol: 1e-12, max_iterations: 3 * cols, restart: 1 };
            let (_, rep) = lsqr(&a, &b, &Identity(cols), &opts).unwrap();
            prop_assert_eq!(rep.residual_history.len(), rep.iterations + 1);
            for w in rep.residual_history.windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
    }
}
