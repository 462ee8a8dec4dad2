//! Dense reference computations used only by tests. Everything here works
//! on row-major `Vec<Vec<f64>>` and depends on nothing but `std`, so the
//! checks stay independent of the library code paths they verify.
#![allow(dead_code, clippy::needless_range_loop)]

pub type Mat = Vec<Vec<f64>>;

pub fn zeros(m: usize, n: usize) -> Mat {
    vec![vec![0.0; n]; m]
}

pub fn identity(n: usize) -> Mat {
    let mut a = zeros(n, n);
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    a
}

pub fn transpose(a: &Mat) -> Mat {
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    let mut t = zeros(n, m);
    for i in 0..m {
        for j in 0..n {
            t[j][i] = a[i][j];
        }
    }
    t
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (m, k, n) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut c = zeros(m, n);
    for i in 0..m {
        for p in 0..k {
            let aip = a[i][p];
            for j in 0..n {
                c[i][j] += aip * b[p][j];
            }
        }
    }
    c
}

pub fn matvec(a: &Mat, x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn gram(a: &Mat) -> Mat {
    matmul(&transpose(a), a)
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn inverse(a: &Mat) -> Mat {
    let n = a.len();
    let mut w = a.clone();
    let mut inv = identity(n);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| w[i][c].abs().total_cmp(&w[j][c].abs())).unwrap();
        w.swap(c, p);
        inv.swap(c, p);
        let d = w[c][c];
        for j in 0..n {
            w[c][j] /= d;
            inv[c][j] /= d;
        }
        for i in 0..n {
            if i != c {
                let f = w[i][c];
                if f != 0.0 {
                    for j in 0..n {
                        w[i][j] -= f * w[c][j];
                        inv[i][j] -= f * inv[c][j];
                    }
                }
            }
        }
    }
    inv
}

/// Solves an SPD system with a textbook row-oriented Cholesky.
pub fn cholesky_solve(a: &Mat, b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut l = zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (a[i][i] - s).sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i][k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k][i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i][i];
    }
    x
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns the
/// eigenvalues in ascending order and the eigenvectors as columns.
pub fn jacobi_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.len();
    let mut w = a.clone();
    let mut v = identity(n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| w[i][j] * w[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| w[i][i] * w[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if w[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (w[q][q] - w[p][p]) / (2.0 * w[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (wkp, wkq) = (w[k][p], w[k][q]);
                    w[k][p] = c * wkp - s * wkq;
                    w[k][q] = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let (wpk, wqk) = (w[p][k], w[q][k]);
                    w[p][k] = c * wpk - s * wqk;
                    w[q][k] = s * wpk + c * wqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[i][i].total_cmp(&w[j][j]));
    let values = order.iter().map(|&i| w[i][i]).collect();
    let mut vectors = zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k][new] = v[k][old];
        }
    }
    (values, vectors)
}

pub fn symmetric_eigenvalues(a: &Mat) -> Vec<f64> {
    jacobi_eigen(a).0
}

/// Eigenvalues of the pencil `(K, B)` with `B` SPD, ascending, via
/// `B^{-1/2} K B^{-1/2}` built from the Jacobi decomposition of `B`.
pub fn generalized_eigenvalues(k: &Mat, b: &Mat) -> Vec<f64> {
    let (bv, bq) = jacobi_eigen(b);
    let n = b.len();
    let mut half_inv = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            half_inv[i][j] = (0..n).map(|p| bq[i][p] * bq[j][p] / bv[p].sqrt()).sum();
        }
    }
    let s = matmul(&matmul(&half_inv, k), &half_inv);
    let s = symmetrize(&s);
    symmetric_eigenvalues(&s)
}

pub fn symmetrize(a: &Mat) -> Mat {
    let n = a.len();
    let mut s = a.clone();
    for i in 0..n {
        for j in 0..n {
            s[i][j] = 0.5 * (a[i][j] + a[j][i]);
        }
    }
    s
}

/// Eigenvalues (ascending) of a general real matrix `M` whose spectrum is
/// known to be real and positive, computed as the generalized eigenvalues
/// of `(S M, S)` for a given SPD `S` that makes `S M` symmetric.
pub fn similar_symmetric_eigenvalues(s: &Mat, m: &Mat) -> Vec<f64> {
    generalized_eigenvalues(&symmetrize(&matmul(s, m)), s)
}

pub fn max_abs(a: &Mat) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}
