//! The 5×4 example: overlap construction, local matrices and the single
//! coarse vector it produces.
//!
//! ```bash
//! cargo run --example worked_example
//! ```

use ls_schwarz::analysis::compute_km;
use ls_schwarz::prelude::*;
use ls_schwarz::problems::worked_example;

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|j| j + 1).collect()
}

fn main() -> ls_schwarz::Result<()> {
    let a = worked_example();
    let d = Decomposition::build(&a, vec![vec![0, 2], vec![1, 3]])?;
    for i in 0..d.num_subdomains() {
        println!(
            "subdomain {}: interior {:?} boundary {:?} rows {:?} D = {:?}",
            i + 1,
            one_based(d.interior(i)),
            one_based(d.boundary(i)),
            one_based(d.rows(i)),
            d.weights(i)
        );
    }
    println!("k_m = {}", compute_km(d.all_rows(), a.nrows()));

    let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Balanced, 2, 0.6);
    let p = Preconditioner::setup_with_partition(&a, &cfg, vec![vec![0, 2], vec![1, 3]])?;
    for sd in p.subdomains() {
        let i = sd.index + 1;
        println!("C_{i}{i} = {:?}", sd.c_ii.to_rows());
        println!("C~_{i}{i} = {:?}", sd.c_tilde_ii.to_rows());
        println!("  local eigenvalues {:?}, kept {}", sd.eigen.spectrum, sd.num_coarse());
    }
    println!("n0 = {}", p.stats().n0);

    let b = [1.0, 2.0, 3.0, 4.0, 5.0];
    let (x, report) = lsqr(&a, &b, &p, &SolverOptions::default())?;
    println!("x = {x:?} after {} iterations, |b - Ax| = {:.6}", report.iterations, report.final_ls_residual);
    Ok(())
}
