use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::preconditioner::{FirstLevel, PreconditionerConfig, SecondLevel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Lsqr,
    Gmres,
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lsqr" => Ok(Self::Lsqr),
            "gmres" => Ok(Self::Gmres),
            _ => Err(Error::InvalidInput(format!("unknown solver '{s}' (lsqr|gmres)"))),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Lsqr => "lsqr",
            Self::Gmres => "gmres",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "value")]
pub enum RhsSource {
    File(PathBuf),
    Random(u64),
}

/// Named preconditioner shorthand: `asm`, `ras`, `additive`, `balanced`,
/// `deflated`. The two-level names imply their usual first level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Variant {
    pub first_level: FirstLevel,
    pub second_level: SecondLevel,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (first_level, second_level) = match s.to_ascii_lowercase().as_str() {
            "asm" => (FirstLevel::Asm, SecondLevel::None),
            "ras" => (FirstLevel::Ras, SecondLevel::None),
            "additive" => (FirstLevel::Asm, SecondLevel::Additive),
            "balanced" => (FirstLevel::Asm, SecondLevel::Balanced),
            "deflated" => (FirstLevel::Ras, SecondLevel::Deflated),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown variant '{s}' (asm|ras|additive|balanced|deflated)"
                )))
            }
        };
        Ok(Self {
            first_level,
            second_level,
        })
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.second_level {
            SecondLevel::None => write!(f, "{}", self.first_level),
            s => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub matrix_path: PathBuf,
    pub rhs: RhsSource,
    pub solver: SolverKind,
    pub preconditioner: PreconditionerConfig,
    pub tol: f64,
    pub maxit: usize,
    pub restart: usize,
    /// One 0-based subdomain id per column.
    pub partition_file: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    /// Writes `<report>.residuals.csv` next to the report.
    pub emit_residual_csv: bool,
    pub verify_bounds: bool,
    pub lanczos_steps: usize,
    pub splitting_trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            matrix_path: PathBuf::new(),
            rhs: RhsSource::Random(0),
            solver: SolverKind::Lsqr,
            preconditioner: PreconditionerConfig::default(),
            tol: 1e-8,
            maxit: 1000,
            restart: 100,
            partition_file: None,
            report_path: None,
            emit_residual_csv: false,
            verify_bounds: false,
            lanczos_steps: crate::analysis::LANCZOS_STEPS,
            splitting_trials: 200,
        }
    }
}

impl RunConfig {
    pub fn new(matrix_path: impl Into<PathBuf>) -> Self {
        Self {
            matrix_path: matrix_path.into(),
            ..Self::default()
        }
    }

    pub fn residual_csv_path(&self) -> Option<PathBuf> {
        if !self.emit_residual_csv {
            return None;
        }
        let report = self.report_path.clone().unwrap_or_else(|| PathBuf::from("report.json"));
        Some(report.with_extension("residuals.csv"))
    }

    /// Reads a `key = value` file. Blank lines and lines starting with `#`
    /// are ignored; relative paths resolve against the file's directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| Error::parse(path, i + 1, format!("expected 'key = value', got '{t}'")))?;
            cfg.set(key.trim(), value.trim(), base)
                .map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
        }
        Ok(cfg)
    }

    /// Applies one setting; `base` resolves relative paths.
    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let resolve = |v: &str| base.join(v);
        let p = &mut self.preconditioner;
        match key {
            "matrix" => self.matrix_path = resolve(value),
            "rhs" => {
                self.rhs = match value {
                    "random" => RhsSource::Random(match self.rhs {
                        RhsSource::Random(s) => s,
                        RhsSource::File(_) => 0,
                    }),
                    file => RhsSource::File(resolve(file)),
                }
            }
            "rhs_seed" => self.rhs = RhsSource::Random(parse(key, value)?),
            "solver" => self.solver = value.parse()?,
            "variant" => {
                let v: Variant = value.parse()?;
                p.first_level = v.first_level;
                p.second_level = v.second_level;
            }
            "first_level" => p.first_level = value.parse()?,
            "second_level" => p.second_level = value.parse()?,
            "tau" => p.tau = parse(key, value)?,
            "cap" => p.cap = parse(key, value)?,
            "subdomains" => p.num_subdomains = parse(key, value)?,
            "seed" => p.seed = parse(key, value)?,
            "allow_any_pairing" => p.allow_any_pairing = parse(key, value)?,
            "tol" => self.tol = parse(key, value)?,
            "maxit" => self.maxit = parse(key, value)?,
            "restart" => self.restart = parse(key, value)?,
            "partition" => self.partition_file = Some(resolve(value)),
            "report" => self.report_path = Some(resolve(value)),
            "residual_csv" => self.emit_residual_csv = parse(key, value)?,
            "verify_bounds" => self.verify_bounds = parse(key, value)?,
            "lanczos_steps" => self.lanczos_steps = parse(key, value)?,
            "splitting_trials" => self.splitting_trials = parse(key, value)?,
            _ => return Err(Error::InvalidInput(format!("unknown key '{key}'"))),
        }
        Ok(())
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad value '{value}' for '{key}'")))
}
