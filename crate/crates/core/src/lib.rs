//! Overlapping Schwarz preconditioners for sparse linear least squares.
//!
//! `min ‖Ax − b‖₂` is solved through the normal equations `AᵀA x = Aᵀb`
//! with LSQR or GMRES. The preconditioners are built algebraically from the
//! sparsity of `A`: the columns are partitioned, each part is grown by the
//! columns sharing a row with it, and each subdomain gets a local matrix
//! `C_ii = A(:,Ωᵢ)ᵀA(:,Ωᵢ)` together with the local splitting
//! `C̃_ii = A(rowsᵢ,Ωᵢ)ᵀA(rowsᵢ,Ωᵢ)`. Eigenvectors of the pencil
//! `(D C_ii D, C̃_ii)` above `1/τ` span a coarse space that makes the
//! two-level methods robust.
//!
//! ```
//! use ls_schwarz::prelude::*;
//!
//! let a = ls_schwarz::problems::grid_least_squares(12, 7, 1);
//! let b = ls_schwarz::problems::random_vector(a.nrows(), 2);
//! let config = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Balanced, 4, 0.6);
//! let m = Preconditioner::setup(&a, &config).unwrap();
//! let (_x, report) = lsqr(&a, &b, &m, &SolverOptions::default()).unwrap();
//! assert!(report.converged());
//! ```

pub mod analysis;
pub mod coarse;
pub mod decomposition;
pub mod error;
pub mod harness;
pub mod krylov;
pub mod operator;
pub mod preconditioner;
pub mod problems;
pub mod sparse;
pub mod subdomain;

#[cfg(test)]
mod oracle;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::decomposition::Decomposition;
    pub use crate::error::{Error, Result};
    pub use crate::krylov::{gmres, gmres_normal_equations, lsqr, SolveReport, SolverOptions, StopReason};
    pub use crate::operator::{Identity, LinearOperator, NormalOperator};
    pub use crate::preconditioner::{FirstLevel, Preconditioner, PreconditionerConfig, SecondLevel};
    pub use crate::sparse::SparseMatrix;
}
