//! Command-line workflow: load a problem, build the preconditioner, solve,
//! and write JSON/CSV reports. Also drives parameter sweeps.

mod config;
mod report;

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

pub use config::{RhsSource, RunConfig, SolverKind, Variant};
pub use report::{residual_csv, ConfigEcho, DecompositionSets, MatrixInfo, RunReport, SolveSection, Timings};

use crate::analysis::{estimate_preconditioned_spectrum, verify_splitting, BoundReport};
use crate::decomposition::{parts_from_ids, read_partition_file};
use crate::error::{check_len, Error, Result};
use crate::krylov::{gmres_normal_equations, lsqr, SolveReport, SolverOptions};
use crate::operator::NormalOperator;
use crate::preconditioner::{Preconditioner, SecondLevel};
use crate::problems::random_vector;
use crate::sparse::mm::{read_matrix_market, read_vector};
use crate::sparse::SparseMatrix;

/// Process exit codes of [`run`].
pub mod exit {
    pub const CONVERGED: i32 = 0;
    pub const NOT_CONVERGED: i32 = 1;
    /// Unreadable or malformed input files, or an invalid configuration.
    pub const INPUT: i32 = 2;
    /// Numerical failure during setup.
    pub const SETUP: i32 = 3;
}

/// Maps an error to its exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Parse { .. } | Error::Json(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. } => {
            exit::INPUT
        }
        _ => exit::SETUP,
    }
}

/// A loaded problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub a: SparseMatrix,
    pub b: Vec<f64>,
    pub partition: Option<Vec<Vec<usize>>>,
}

impl Problem {
    pub fn load(config: &RunConfig) -> Result<Self> {
        let a = read_matrix_market(&config.matrix_path)?;
        let b = match &config.rhs {
            RhsSource::File(path) => {
                let b = read_vector(path)?;
                check_len("right-hand side length", a.nrows(), b.len())?;
                b
            }
            RhsSource::Random(seed) => random_vector(a.nrows(), *seed),
        };
        let partition = match &config.partition_file {
            Some(path) => {
                let ids = read_partition_file(path)?;
                Some(parts_from_ids(&ids, a.ncols(), config.preconditioner.num_subdomains)?)
            }
            None => None,
        };
        Ok(Self { a, b, partition })
    }
}

/// Everything a run produces.
#[derive(Debug)]
pub struct RunOutcome {
    pub x: Vec<f64>,
    pub solve: SolveReport,
    pub report: RunReport,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.solve.converged() {
            exit::CONVERGED
        } else {
            exit::NOT_CONVERGED
        }
    }
}

/// Builds the preconditioner and solves an already loaded problem. Nothing
/// is written to disk.
pub fn execute(config: &RunConfig, problem: &Problem) -> Result<RunOutcome> {
    let a = &problem.a;
    let pc = &config.preconditioner;
    let p = match &problem.partition {
        Some(sets) => Preconditioner::setup_with_partition(a, pc, sets.clone())?,
        None => Preconditioner::setup(a, pc)?,
    };
    let opts = SolverOptions {
        tol: config.tol,
        max_iterations: config.maxit,
        restart: config.restart,
    };
    let start = Instant::now();
    let (x, solve) = match config.solver {
        SolverKind::Lsqr => {
            if !p.is_symmetric() {
                return Err(Error::InvalidInput(format!(
                    "LSQR needs a symmetric preconditioner; {} with {} is not",
                    pc.first_level, pc.second_level
                )));
            }
            lsqr(a, &problem.b, &p, &opts)?
        }
        SolverKind::Gmres => gmres_normal_equations(a, &problem.b, &p, &opts)?,
    };
    let solve_seconds = start.elapsed().as_secs_f64();

    let (bounds, splitting) = if config.verify_bounds {
        let split = verify_splitting(a, p.decomposition(), p.subdomains(), config.splitting_trials, pc.seed);
        let bounds = p.is_symmetric().then(|| {
            let est = estimate_preconditioned_spectrum(&p, &NormalOperator::new(a), config.lanczos_steps, pc.seed);
            let applies = pc.second_level == SecondLevel::Additive;
            BoundReport::new(p.stats().k_m, p.stats().k_c_greedy, pc.tau, &est, applies)
        });
        (bounds, Some(split))
    } else {
        (None, None)
    };

    let report = RunReport::assemble(config, a.nrows(), a.nnz(), &p, &solve, solve_seconds, bounds, splitting);
    Ok(RunOutcome { x, solve, report })
}

/// Loads, solves and writes the configured outputs.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let problem = Problem::load(config)?;
    let outcome = execute(config, &problem)?;
    if let Some(path) = &config.report_path {
        outcome.report.write(path)?;
    }
    if let Some(path) = config.residual_csv_path() {
        std::fs::write(&path, residual_csv(&outcome.solve.residual_history))?;
    }
    if let Some(split) = &outcome.report.splitting {
        if let (Some(w), Some(report)) = (&split.witness, &config.report_path) {
            crate::sparse::mm::write_vector(report.with_extension("witness.txt"), w)?;
        }
    }
    Ok(outcome)
}

/// [`run`] reduced to a process exit code; errors are logged.
pub fn run_exit_code(config: &RunConfig) -> i32 {
    match run(config) {
        Ok(out) => out.exit_code(),
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxis {
    Tau(Vec<f64>),
    Subdomains(Vec<usize>),
    Variant(Vec<Variant>),
}

impl SweepAxis {
    pub fn len(&self) -> usize {
        match self {
            Self::Tau(v) => v.len(),
            Self::Subdomains(v) => v.len(),
            Self::Variant(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Tau(_) => "tau",
            Self::Subdomains(_) => "subdomains",
            Self::Variant(_) => "variant",
        }
    }

    /// Parses a comma-separated list for the named axis.
    pub fn parse(name: &str, values: &str) -> Result<Self> {
        let items: Vec<&str> = values.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let bad = |v: &str| Error::InvalidInput(format!("bad {name} value '{v}'"));
        Ok(match name {
            "tau" => Self::Tau(items.iter().map(|v| v.parse().map_err(|_| bad(v))).collect::<Result<_>>()?),
            "subdomains" | "n" => {
                Self::Subdomains(items.iter().map(|v| v.parse().map_err(|_| bad(v))).collect::<Result<_>>()?)
            }
            "variant" => Self::Variant(items.iter().map(|v| v.parse()).collect::<Result<_>>()?),
            _ => return Err(Error::InvalidInput(format!("unknown sweep axis '{name}' (tau|subdomains|variant)"))),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub value: String,
    pub n0: Option<usize>,
    pub iterations: Option<usize>,
    pub setup_time: Option<f64>,
    pub solve_time: Option<f64>,
    pub stop_reason: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub axis: &'static str,
    pub rows: Vec<SweepRow>,
    /// For a τ axis: whether `n₀` is nondecreasing in τ over successful rows.
    pub n0_monotone_in_tau: Option<bool>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let mut out = String::from("value,n0,iterations,setup_time,solve_time,stop_reason,error\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.value,
                opt(r.n0.map(|v| v.to_string())),
                opt(r.iterations.map(|v| v.to_string())),
                opt(r.setup_time.map(|v| format!("{v:.6}"))),
                opt(r.solve_time.map(|v| format!("{v:.6}"))),
                opt(r.stop_reason.clone()),
                opt(r.error.as_ref().map(|e| format!("\"{}\"", e.replace('"', "'")))),
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// One run per axis value on the same loaded problem. Failing runs are
/// recorded in their row and the sweep continues.
pub fn sweep(config: &RunConfig, axis: &SweepAxis) -> Result<SweepResult> {
    if axis.is_empty() {
        return Err(Error::InvalidInput("sweep axis has no values".into()));
    }
    let mut base = config.clone();
    if matches!(axis, SweepAxis::Subdomains(_)) {
        base.partition_file = None;
    }
    let problem = Problem::load(&base)?;

    let mut configs = Vec::new();
    match axis {
        SweepAxis::Tau(values) => {
            for &t in values {
                let mut c = base.clone();
                c.preconditioner.tau = t;
                configs.push((t.to_string(), c));
            }
        }
        SweepAxis::Subdomains(values) => {
            for &n in values {
                let mut c = base.clone();
                c.preconditioner.num_subdomains = n;
                configs.push((n.to_string(), c));
            }
        }
        SweepAxis::Variant(values) => {
            for v in values {
                let mut c = base.clone();
                c.preconditioner.first_level = v.first_level;
                c.preconditioner.second_level = v.second_level;
                configs.push((v.to_string(), c));
            }
        }
    }

    let rows: Vec<SweepRow> = configs
        .iter()
        .map(|(value, c)| match execute(c, &problem) {
            Ok(out) => SweepRow {
                value: value.clone(),
                n0: Some(out.report.setup.n0),
                iterations: Some(out.solve.iterations),
                setup_time: Some(out.report.timings.setup),
                solve_time: Some(out.report.timings.solve),
                stop_reason: Some(out.solve.stop_reason.to_string()),
                error: None,
            },
            Err(e) => {
                log::warn!("sweep value {value} failed: {e}");
                SweepRow {
                    value: value.clone(),
                    n0: None,
                    iterations: None,
                    setup_time: None,
                    solve_time: None,
                    stop_reason: None,
                    error: Some(e.to_string()),
                }
            }
        })
        .collect();

    let n0_monotone_in_tau = match axis {
        SweepAxis::Tau(values) => {
            let mut pairs: Vec<(f64, usize)> = values
                .iter()
                .zip(&rows)
                .filter_map(|(&t, r)| r.n0.map(|n0| (t, n0)))
                .collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            Some(pairs.windows(2).all(|w| w[0].1 <= w[1].1))
        }
        _ => None,
    };
    if n0_monotone_in_tau == Some(false) {
        log::warn!("coarse dimension is not monotone in tau");
    }
    Ok(SweepResult {
        axis: axis.name(),
        rows,
        n0_monotone_in_tau,
    })
}
