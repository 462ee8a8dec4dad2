//! Square linear operators consumed by the Krylov solvers.

use crate::sparse::SparseMatrix;

pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = Op x`; `y` is overwritten.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply(x, &mut y);
        y
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

/// Implicit normal operator `x ↦ Aᵀ(A x)`; `AᵀA` is never formed.
#[derive(Debug, Clone, Copy)]
pub struct NormalOperator<'a> {
    a: &'a SparseMatrix,
}

impl<'a> NormalOperator<'a> {
    pub fn new(a: &'a SparseMatrix) -> Self {
        Self { a }
    }
}

impl LinearOperator for NormalOperator<'_> {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut ax = vec![0.0; self.a.nrows()];
        self.a.spmv_into(x, &mut ax);
        self.a.spmv_transpose_into(&ax, y);
    }
}

/// Wraps a closure as an operator.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64]) + Sync> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64]) + Sync> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}
