//! Lanczos estimate of κ(M C) for the two-level additive preconditioner
//! next to the bound `(k_c + 1)(2 + (2k_c + 1) k_m / τ)`.
//!
//! ```bash
//! cargo run --release --example condition_bound
//! ```

use ls_schwarz::analysis::{estimate_preconditioned_spectrum, verify_splitting, BoundReport, LANCZOS_STEPS};
use ls_schwarz::prelude::*;
use ls_schwarz::problems::grid_least_squares;

fn main() -> ls_schwarz::Result<()> {
    let a = grid_least_squares(24, 13, 2);
    for n in [2, 4, 8] {
        for tau in [0.1, 0.6] {
            let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Additive, n, tau);
            let p = Preconditioner::setup(&a, &cfg)?;
            let spectrum = estimate_preconditioned_spectrum(&p, &NormalOperator::new(&a), LANCZOS_STEPS, 0);
            let s = p.stats();
            let report = BoundReport::new(s.k_m, s.k_c_greedy, tau, &spectrum, true);
            let split = verify_splitting(&a, p.decomposition(), p.subdomains(), 200, 0);
            println!(
                "N={n} tau={tau}: n0={:3} k_m={} k_c={} λ∈[{:.3}, {:.3}] κ={:.2} ≤ {:.1}: {:?}, splitting holds: {}",
                s.n0,
                s.k_m,
                s.k_c_greedy,
                report.lambda_min_est,
                report.lambda_max_est,
                report.kappa_est,
                report.theoretical_bound,
                report.verified,
                split.holds
            );
        }
    }
    Ok(())
}
