//! Right-preconditioned GMRES on the normal equations with restricted
//! additive Schwarz, with and without the deflated coarse correction.
//!
//! ```bash
//! cargo run --release --example gmres_deflated
//! ```

use ls_schwarz::prelude::*;
use ls_schwarz::problems::{grid_least_squares, random_vector};

fn main() -> ls_schwarz::Result<()> {
    let a = grid_least_squares(32, 11, 5);
    let b = random_vector(a.nrows(), 2);
    let opts = SolverOptions::default();

    let ras = Preconditioner::setup(&a, &PreconditionerConfig::one_level(FirstLevel::Ras, 8))?;
    let cfg = PreconditionerConfig::two_level(FirstLevel::Ras, SecondLevel::Deflated, 8, 0.6);
    let deflated = Preconditioner::setup(&a, &cfg)?;

    for (name, p) in [("RAS", &ras), ("deflated", &deflated)] {
        let (_, r) = gmres_normal_equations(&a, &b, p, &opts)?;
        println!(
            "{name:9} {:3} iterations, ‖Aᵀ(b − Ax)‖ = {:.3e}, ‖b − Ax‖ = {:.6}",
            r.iterations, r.final_normal_residual, r.final_ls_residual
        );
    }
    println!("coarse space: {:?}", deflated.coarse().map(|c| c.summary()));
    Ok(())
}
