#![allow(dead_code)]

#[path = "../../src/oracle.rs"]
pub mod oracle;

use std::path::PathBuf;

use ls_schwarz::problems::{grid_least_squares, random_sparse, worked_example};
use ls_schwarz::sparse::mm::read_matrix_market;
use ls_schwarz::sparse::SparseMatrix;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn bfwb62() -> SparseMatrix {
    read_matrix_market(data_path("bfwb62.mtx")).expect("bundled matrix")
}

pub fn random_300x200(k: u64) -> SparseMatrix {
    random_sparse(300, 200, 3, 1000 + k)
}

/// The 5×4 example with its two-part column partition {1,3} / {2,4}.
pub fn worked_partition() -> Vec<Vec<usize>> {
    vec![vec![0, 2], vec![1, 3]]
}

pub struct Named {
    pub name: &'static str,
    pub a: SparseMatrix,
}

/// Matrices the acceptance checks run on.
pub fn acceptance_matrices() -> Vec<Named> {
    vec![
        Named { name: "worked-5x4", a: worked_example() },
        Named { name: "random-300x200-a", a: random_300x200(0) },
        Named { name: "random-300x200-b", a: random_300x200(1) },
        Named { name: "random-300x200-c", a: random_300x200(2) },
        Named { name: "bfwb62", a: bfwb62() },
        Named { name: "grid-20", a: grid_least_squares(20, 9, 1) },
        Named { name: "grid-24", a: grid_least_squares(24, 13, 2) },
    ]
}

pub fn to_rows(a: &SparseMatrix) -> oracle::Mat {
    a.to_dense().to_rows()
}

/// Dense least-squares solution through the normal equations.
pub fn dense_ls_solution(a: &SparseMatrix, b: &[f64]) -> Vec<f64> {
    let ad = to_rows(a);
    let c = oracle::gram(&ad);
    oracle::cholesky_solve(&c, &oracle::matvec(&oracle::transpose(&ad), b))
}

/// `‖x − y‖_C / ‖y‖_C` with `C = AᵀA`.
pub fn relative_c_error(a: &SparseMatrix, x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
    let ad = a.spmv(&d).unwrap();
    let ay = a.spmv(y).unwrap();
    let n = |v: &[f64]| v.iter().map(|e| e * e).sum::<f64>().sqrt();
    n(&ad) / n(&ay)
}

/// `bfwb62` restricted to its first `cols` columns.
pub fn bfwb62_block(cols: usize) -> SparseMatrix {
    let a = bfwb62();
    let rows: Vec<usize> = (0..a.nrows()).collect();
    let keep: Vec<usize> = (0..cols).collect();
    a.extract_submatrix(&rows, &keep).unwrap()
}
