use std::path::Path;

use serde::Serialize;

use crate::analysis::{BoundReport, SplittingCheck};
use crate::decomposition::Decomposition;
use crate::krylov::{SolveReport, StopReason};
use crate::preconditioner::{Preconditioner, SetupStats};

use super::config::{RhsSource, RunConfig, SolverKind};

/// Run report. Every key is always present; values that were not computed
/// are `null`. Index sets are 1-based.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub matrix: MatrixInfo,
    pub config: ConfigEcho,
    pub decomposition: DecompositionSets,
    pub setup: SetupStats,
    pub solve: SolveSection,
    pub bounds: Option<BoundReport>,
    pub splitting: Option<SplittingCheck>,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixInfo {
    pub path: String,
    pub m: usize,
    pub n: usize,
    pub nnz: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub solver: SolverKind,
    pub first_level: String,
    pub second_level: String,
    pub tau: f64,
    pub cap: usize,
    pub num_subdomains: usize,
    pub seed: u64,
    pub tol: f64,
    pub maxit: usize,
    pub restart: usize,
    pub rhs: RhsSource,
    pub partition_file: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSets {
    pub interior: Vec<Vec<usize>>,
    pub boundary: Vec<Vec<usize>>,
    pub overlapping: Vec<Vec<usize>>,
    pub rows: Vec<Vec<usize>>,
    pub weights: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveSection {
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub converged: bool,
    pub final_ls_residual: f64,
    pub final_normal_residual: f64,
    pub operator_norm_estimate: f64,
    pub residual_history: Vec<f64>,
}

/// Wall-clock seconds per phase. `setup` includes `partition` and
/// `eigensolve`; `eigensolve` is summed over subdomains.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Timings {
    pub partition: f64,
    pub eigensolve: f64,
    pub setup: f64,
    pub solve: f64,
}

fn one_based(sets: impl Iterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    sets.map(|s| s.into_iter().map(|j| j + 1).collect()).collect()
}

impl DecompositionSets {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        let k = d.num_subdomains();
        Self {
            interior: one_based((0..k).map(|i| d.interior(i).to_vec())),
            boundary: one_based((0..k).map(|i| d.boundary(i).to_vec())),
            overlapping: one_based((0..k).map(|i| d.overlapping(i).to_vec())),
            rows: one_based((0..k).map(|i| d.rows(i).to_vec())),
            weights: (0..k).map(|i| d.weights(i).to_vec()).collect(),
        }
    }
}

impl ConfigEcho {
    pub fn from_config(c: &RunConfig) -> Self {
        let p = &c.preconditioner;
        Self {
            solver: c.solver,
            first_level: p.first_level.to_string(),
            second_level: p.second_level.to_string(),
            tau: p.tau,
            cap: p.cap,
            num_subdomains: p.num_subdomains,
            seed: p.seed,
            tol: c.tol,
            maxit: c.maxit,
            restart: c.restart,
            rhs: c.rhs.clone(),
            partition_file: c.partition_file.as_ref().map(|p| p.display().to_string()),
        }
    }
}

impl SolveSection {
    pub fn from_report(r: &SolveReport) -> Self {
        Self {
            iterations: r.iterations,
            stop_reason: r.stop_reason,
            converged: r.converged(),
            final_ls_residual: r.final_ls_residual,
            final_normal_residual: r.final_normal_residual,
            operator_norm_estimate: r.operator_norm_estimate,
            residual_history: r.residual_history.clone(),
        }
    }
}

impl RunReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        config: &RunConfig,
        m: usize,
        nnz: usize,
        p: &Preconditioner,
        solve: &SolveReport,
        solve_seconds: f64,
        bounds: Option<BoundReport>,
        splitting: Option<SplittingCheck>,
    ) -> Self {
        let stats = p.stats().clone();
        let t = &stats.timings;
        let timings = Timings {
            partition: t.partition.as_secs_f64(),
            eigensolve: t.eigensolve.as_secs_f64(),
            setup: t.setup.as_secs_f64(),
            solve: solve_seconds,
        };
        Self {
            matrix: MatrixInfo {
                path: config.matrix_path.display().to_string(),
                m,
                n: p.decomposition().n(),
                nnz,
            },
            config: ConfigEcho::from_config(config),
            decomposition: DecompositionSets::from_decomposition(p.decomposition()),
            setup: stats,
            solve: SolveSection::from_report(solve),
            bounds,
            splitting,
            timings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> crate::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

/// `iteration,residual` rows, one per history entry.
pub fn residual_csv(history: &[f64]) -> String {
    let mut out = String::from("iteration,residual\n");
    for (k, r) in history.iter().enumerate() {
        out.push_str(&format!("{k},{r:e}\n"));
    }
    out
}
