//! LSQR with the one-level additive Schwarz preconditioner against the
//! balanced two-level one.
//!
//! ```bash
//! cargo run --release --example lsqr_two_level
//! ```

use ls_schwarz::prelude::*;
use ls_schwarz::problems::{grid_least_squares, random_vector};

fn main() -> ls_schwarz::Result<()> {
    let a = grid_least_squares(40, 17, 3);
    let b = random_vector(a.nrows(), 1);
    println!("A: {} x {}, {} nonzeros", a.nrows(), a.ncols(), a.nnz());

    let (_, plain) = lsqr(&a, &b, &Identity(a.ncols()), &SolverOptions::default())?;
    println!("no preconditioner: {} iterations ({})", plain.iterations, plain.stop_reason);

    for n in [4, 8, 16] {
        let asm = Preconditioner::setup(&a, &PreconditionerConfig::one_level(FirstLevel::Asm, n))?;
        let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Balanced, n, 0.6);
        let balanced = Preconditioner::setup(&a, &cfg)?;
        let (_, r1) = lsqr(&a, &b, &asm, &SolverOptions::default())?;
        let (_, r2) = lsqr(&a, &b, &balanced, &SolverOptions::default())?;
        println!(
            "N={n:2}: ASM {:3} iterations, balanced {:3} iterations (n0 = {})",
            r1.iterations,
            r2.iterations,
            balanced.stats().n0
        );
    }
    Ok(())
}
