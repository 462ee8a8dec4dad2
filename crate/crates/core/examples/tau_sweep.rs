//! Coarse dimension and iteration count as the threshold τ varies, written
//! as the CSV the `sweep` subcommand produces.
//!
//! ```bash
//! cargo run --release --example tau_sweep
//! ```

use ls_schwarz::harness::{sweep, RunConfig, SweepAxis};
use ls_schwarz::problems::grid_least_squares;
use ls_schwarz::sparse::mm::{write_matrix_market, Symmetry};

fn main() -> ls_schwarz::Result<()> {
    let dir = std::env::temp_dir().join("ls-schwarz-tau-sweep");
    std::fs::create_dir_all(&dir)?;
    let matrix = dir.join("grid.mtx");
    write_matrix_market(&matrix, &grid_least_squares(32, 11, 7), Symmetry::General)?;

    let mut cfg = RunConfig::new(&matrix);
    cfg.preconditioner.num_subdomains = 8;
    let taus = vec![0.01275, 0.02, 0.05, 0.1, 0.4, 0.6];
    let result = sweep(&cfg, &SweepAxis::Tau(taus))?;
    print!("{}", result.to_csv());
    println!("n0 nondecreasing in tau: {:?}", result.n0_monotone_in_tau);
    Ok(())
}
