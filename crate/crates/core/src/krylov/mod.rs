//! Krylov solvers: preconditioned LSQR on `min ‖Ax − b‖` and
//! right-preconditioned restarted GMRES on `AᵀA x = Aᵀb`.

mod gmres;
mod lsqr;

use serde::Serialize;

pub use gmres::{gmres, gmres_normal_equations};
pub use lsqr::lsqr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    Converged,
    #[serde(rename = "maxit")]
    MaxIterations,
    Breakdown,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Converged => "converged",
            Self::MaxIterations => "maxit",
            Self::Breakdown => "breakdown",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: usize,
    /// GMRES cycle length; ignored by LSQR.
    pub restart: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iterations: 1000,
            restart: 100,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub stop_reason: StopReason,
    /// LSQR: `‖b − A x_k‖`. GMRES: `‖rhs − C x_k‖`. Length `iterations + 1`.
    pub residual_history: Vec<f64>,
    /// LSQR only: the preconditioned normal residual per iteration.
    pub normal_residual_history: Vec<f64>,
    /// LSQR: running `‖A‖_{M,F}` from the bidiagonalization. GMRES: largest
    /// Hessenberg column norm, a lower bound on `‖C M‖₂`.
    pub operator_norm_estimate: f64,
    /// `‖b − A x‖` recomputed from the returned iterate; NaN when the solver
    /// never saw `A` (plain [`gmres`]).
    pub final_ls_residual: f64,
    /// `‖Aᵀ(b − A x)‖` (or `‖rhs − C x‖` for plain GMRES), recomputed.
    pub final_normal_residual: f64,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.stop_reason == StopReason::Converged
    }
}
