use super::{SolveReport, SolverOptions, StopReason};
use crate::error::{check_len, Error, Result};
use crate::operator::{LinearOperator, NormalOperator};
use crate::sparse::{axpy, dot, norm2, SparseMatrix};

/// Restarted GMRES on `C x = rhs`, right-preconditioned by `M`. Arnoldi uses
/// modified Gram–Schmidt and the least-squares problem is updated with
/// Givens rotations, so the monitored quantity is the unpreconditioned
/// residual `‖rhs − C x‖`.
///
/// A lucky breakdown ends the solve as converged. A cycle that fails to
/// reduce the residual at all is reported as [`StopReason::Breakdown`].
pub fn gmres(
    c: &dyn LinearOperator,
    rhs: &[f64],
    m: &dyn LinearOperator,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = c.dim();
    check_len("gmres: right-hand side", n, rhs.len())?;
    check_len("gmres: preconditioner dimension", n, m.dim())?;
    if opts.restart == 0 {
        return Err(Error::InvalidInput("gmres restart must be at least 1".into()));
    }
    let restart = opts.restart.min(n.max(1));

    let rhs_norm = norm2(rhs);
    let target = opts.tol * rhs_norm;
    let mut x = vec![0.0; n];
    let mut history = vec![rhs_norm];
    let mut iterations = 0;
    let mut hnorm: f64 = 0.0;
    let mut reason = StopReason::MaxIterations;

    let mut r = rhs.to_vec();
    let mut beta = rhs_norm;
    let mut cx = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut w = vec![0.0; n];

    'outer: while iterations < opts.max_iterations {
        if !beta.is_finite() {
            reason = StopReason::Breakdown;
            break;
        }
        if beta <= target || beta == 0.0 {
            reason = StopReason::Converged;
            break;
        }
        let cycle_start = beta;
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|e| e / beta).collect()];
        // column j of the Hessenberg matrix, rotated in place
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(restart);
        let mut cs: Vec<f64> = Vec::with_capacity(restart);
        let mut sn: Vec<f64> = Vec::with_capacity(restart);
        let mut g = vec![beta];
        let mut done = false;

        for j in 0..restart {
            if iterations >= opts.max_iterations {
                break;
            }
            m.apply(&basis[j], &mut z);
            c.apply(&z, &mut w);
            let mut col = vec![0.0; j + 2];
            for (i, vi) in basis.iter().enumerate() {
                let hij = dot(&w, vi);
                col[i] = hij;
                axpy(-hij, vi, &mut w);
            }
            let hnext = norm2(&w);
            col[j + 1] = hnext;
            hnorm = hnorm.max(norm2(&col));

            for i in 0..j {
                let (a, b) = (col[i], col[i + 1]);
                col[i] = cs[i] * a + sn[i] * b;
                col[i + 1] = -sn[i] * a + cs[i] * b;
            }
            let denom = col[j].hypot(col[j + 1]);
            let (cj, sj) = if denom == 0.0 { (1.0, 0.0) } else { (col[j] / denom, col[j + 1] / denom) };
            col[j] = denom;
            col[j + 1] = 0.0;
            cs.push(cj);
            sn.push(sj);
            let gj = g[j];
            g[j] = cj * gj;
            g.push(-sj * gj);
            h.push(col);
            iterations += 1;

            let res = g[j + 1].abs();
            history.push(res);
            if !res.is_finite() {
                reason = StopReason::Breakdown;
                update(&mut x, &h, &g, &basis, m, &mut z);
                break 'outer;
            }
            let lucky = hnext <= 1e-14 * hnorm;
            if res <= target || lucky {
                update(&mut x, &h, &g, &basis, m, &mut z);
                reason = StopReason::Converged;
                done = true;
                break;
            }
            basis.push(w.iter().map(|e| e / hnext).collect());
        }
        if !done {
            update(&mut x, &h, &g, &basis, m, &mut z);
        }

        c.apply(&x, &mut cx);
        for ((ri, bi), ci) in r.iter_mut().zip(rhs).zip(&cx) {
            *ri = bi - ci;
        }
        beta = norm2(&r);
        if done {
            if let Some(last) = history.last_mut() {
                *last = beta;
            }
            if beta > target && beta > 1e-12 * rhs_norm.max(f64::MIN_POSITIVE) {
                // estimate and true residual disagree; keep iterating
                reason = StopReason::MaxIterations;
                if beta >= cycle_start {
                    reason = StopReason::Breakdown;
                    break;
                }
                continue;
            }
            break;
        }
        if beta >= cycle_start {
            reason = StopReason::Breakdown;
            break;
        }
        if iterations >= opts.max_iterations && beta <= target {
            reason = StopReason::Converged;
        }
    }

    c.apply(&x, &mut cx);
    let final_res = norm2(&rhs.iter().zip(&cx).map(|(b, c)| b - c).collect::<Vec<_>>());
    let report = SolveReport {
        iterations,
        stop_reason: reason,
        residual_history: history,
        normal_residual_history: Vec::new(),
        operator_norm_estimate: hnorm,
        final_ls_residual: f64::NAN,
        final_normal_residual: final_res,
    };
    Ok((x, report))
}

/// `x += M V y` where `H y = g` is the rotated triangular system.
fn update(x: &mut [f64], h: &[Vec<f64>], g: &[f64], basis: &[Vec<f64>], m: &dyn LinearOperator, z: &mut [f64]) {
    let k = h.len();
    if k == 0 {
        return;
    }
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = g[i];
        for j in i + 1..k {
            s -= h[j][i] * y[j];
        }
        y[i] = if h[i][i] != 0.0 { s / h[i][i] } else { 0.0 };
    }
    let mut vy = vec![0.0; x.len()];
    for (yi, vi) in y.iter().zip(basis) {
        axpy(*yi, vi, &mut vy);
    }
    m.apply(&vy, z);
    axpy(1.0, z, x);
}

/// GMRES on `AᵀA x = Aᵀb` through the implicit operator; the report also
/// carries `‖b − A x‖`.
pub fn gmres_normal_equations(
    a: &SparseMatrix,
    b: &[f64],
    m: &dyn LinearOperator,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, SolveReport)> {
    check_len("gmres: right-hand side", a.nrows(), b.len())?;
    let rhs = a.spmv_transpose(b)?;
    let (x, mut report) = gmres(&NormalOperator::new(a), &rhs, m, opts)?;
    let ax = a.spmv(&x)?;
    report.final_ls_residual = norm2(&b.iter().zip(&ax).map(|(p, q)| p - q).collect::<Vec<_>>());
    Ok((x, report))
}
