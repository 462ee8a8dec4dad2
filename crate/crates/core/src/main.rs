use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ls_schwarz::harness::{self, exit, RunConfig, SweepAxis};

/// Schwarz-preconditioned LSQR/GMRES for sparse least squares.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the preconditioner, solve, and write the report.
    Run(RunArgs),
    /// Repeat a run over several values of τ, N, or the variant.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// tau | subdomains | variant
    #[arg(long)]
    axis: String,
    /// Comma-separated values, e.g. 0.01,0.05,0.2,0.6 or asm,balanced.
    #[arg(long)]
    values: String,
    /// Aggregated CSV; printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    /// key = value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Matrix Market file holding A.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Right-hand side file, or `random`.
    #[arg(long)]
    rhs: Option<String>,
    #[arg(long)]
    rhs_seed: Option<u64>,
    /// lsqr | gmres
    #[arg(long)]
    solver: Option<String>,
    /// asm | ras | additive | balanced | deflated
    #[arg(long)]
    variant: Option<String>,
    /// asm | ras
    #[arg(long)]
    first_level: Option<String>,
    /// none | additive | balanced | deflated
    #[arg(long)]
    second_level: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    /// Maximum eigenpairs kept per subdomain.
    #[arg(long)]
    cap: Option<usize>,
    /// Number of subdomains N.
    #[arg(long, short = 'n')]
    subdomains: Option<usize>,
    /// Partitioner seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    allow_any_pairing: bool,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    maxit: Option<usize>,
    #[arg(long)]
    restart: Option<usize>,
    /// One 0-based subdomain id per column.
    #[arg(long)]
    partition: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write `<report>.residuals.csv`.
    #[arg(long)]
    residual_csv: bool,
    /// Check the splitting inequalities and estimate the preconditioned spectrum.
    #[arg(long)]
    verify_bounds: bool,
}

impl Common {
    fn into_config(self) -> ls_schwarz::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let here = Path::new("");
        let mut set = |key: &str, value: Option<String>| match value {
            Some(v) => cfg.set(key, &v, here),
            None => Ok(()),
        };
        set("matrix", self.matrix.map(|p| p.display().to_string()))?;
        set("rhs", self.rhs)?;
        set("rhs_seed", self.rhs_seed.map(|v| v.to_string()))?;
        set("solver", self.solver)?;
        set("variant", self.variant)?;
        set("first_level", self.first_level)?;
        set("second_level", self.second_level)?;
        set("tau", self.tau.map(|v| v.to_string()))?;
        set("cap", self.cap.map(|v| v.to_string()))?;
        set("subdomains", self.subdomains.map(|v| v.to_string()))?;
        set("seed", self.seed.map(|v| v.to_string()))?;
        set("tol", self.tol.map(|v| v.to_string()))?;
        set("maxit", self.maxit.map(|v| v.to_string()))?;
        set("restart", self.restart.map(|v| v.to_string()))?;
        set("partition", self.partition.map(|p| p.display().to_string()))?;
        set("report", self.report.map(|p| p.display().to_string()))?;
        if self.allow_any_pairing {
            cfg.preconditioner.allow_any_pairing = true;
        }
        if self.residual_csv {
            cfg.emit_residual_csv = true;
        }
        if self.verify_bounds {
            cfg.verify_bounds = true;
        }
        if cfg.matrix_path.as_os_str().is_empty() {
            return Err(ls_schwarz::Error::InvalidInput("no matrix given (--matrix or 'matrix =')".into()));
        }
        Ok(cfg)
    }
}

fn fail(e: ls_schwarz::Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(harness::exit_code(&e) as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let cfg = match args.common.into_config() {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match harness::run(&cfg) {
                Ok(out) => {
                    let s = &out.report.solve;
                    println!(
                        "{} with {}: {} after {} iterations, n0 = {}, |b - Ax| = {:e}",
                        cfg.solver,
                        harness::Variant {
                            first_level: cfg.preconditioner.first_level,
                            second_level: cfg.preconditioner.second_level
                        },
                        s.stop_reason,
                        s.iterations,
                        out.report.setup.n0,
                        s.final_ls_residual
                    );
                    if cfg.report_path.is_none() {
                        println!("{}", out.report.to_json());
                    }
                    ExitCode::from(out.exit_code() as u8)
                }
                Err(e) => fail(e),
            }
        }
        Command::Sweep(args) => {
            let result = args
                .common
                .into_config()
                .and_then(|cfg| Ok((cfg, SweepAxis::parse(&args.axis, &args.values)?)))
                .and_then(|(cfg, axis)| harness::sweep(&cfg, &axis));
            match result {
                Ok(sweep) => {
                    let written = match &args.output {
                        Some(path) => sweep.write_csv(path),
                        None => {
                            print!("{}", sweep.to_csv());
                            Ok(())
                        }
                    };
                    if let Err(e) = written {
                        return fail(e);
                    }
                    if sweep.n0_monotone_in_tau == Some(false) {
                        eprintln!("warning: n0 is not monotone in tau");
                    }
                    let failed = sweep.rows.iter().any(|r| r.error.is_some());
                    ExitCode::from(if failed { exit::NOT_CONVERGED } else { exit::CONVERGED } as u8)
                }
                Err(e) => fail(e),
            }
        }
    }
}
