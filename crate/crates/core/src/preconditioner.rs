//! One- and two-level overlapping Schwarz preconditioners for `C = AᵀA`.
//!
//! | variant  | operator                                  | symmetric |
//! |----------|-------------------------------------------|-----------|
//! | ASM      | `Σ Rᵢᵀ C_ii⁻¹ Rᵢ`                          | yes       |
//! | RAS      | `Σ Rᵢᵀ Dᵢ C_ii⁻¹ Rᵢ`                       | no        |
//! | additive | `Q + M_ASM`                               | yes       |
//! | balanced | `Q + (I − CQ)ᵀ M_ASM (I − CQ)`            | yes       |
//! | deflated | `Q + M_RAS (I − CQ)`                      | no        |
//!
//! with `Q = R₀ᵀ C₀₀⁻¹ R₀`. Products with `C` inside the corrections go
//! through `A` and `Aᵀ`; the matrix `C` is assembled only to drive the
//! partitioner and the construction shift.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::coarse::{assemble_coarse_basis, factor_coarse, CoarseSpace};
use crate::decomposition::{partition_columns, Decomposition};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::sparse::SparseMatrix;
use crate::subdomain::{GevpParams, SubdomainData};

/// Relative construction shift, `δ = CONSTRUCTION_SHIFT · ‖C‖_F`. It enters
/// the factored local and coarse matrices only, never the Krylov operator.
pub const CONSTRUCTION_SHIFT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FirstLevel {
    Asm,
    Ras,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SecondLevel {
    None,
    Additive,
    Balanced,
    Deflated,
}

impl FromStr for FirstLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "asm" => Ok(Self::Asm),
            "ras" => Ok(Self::Ras),
            _ => Err(Error::InvalidInput(format!("unknown first level '{s}' (asm|ras)"))),
        }
    }
}

impl FromStr for SecondLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Self::None),
            "additive" => Ok(Self::Additive),
            "balanced" => Ok(Self::Balanced),
            "deflated" => Ok(Self::Deflated),
            _ => Err(Error::InvalidInput(format!(
                "unknown second level '{s}' (none|additive|balanced|deflated)"
            ))),
        }
    }
}

impl fmt::Display for FirstLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Asm => "asm",
            Self::Ras => "ras",
        })
    }
}

impl fmt::Display for SecondLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Additive => "additive",
            Self::Balanced => "balanced",
            Self::Deflated => "deflated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreconditionerConfig {
    pub first_level: FirstLevel,
    pub second_level: SecondLevel,
    pub tau: f64,
    pub cap: usize,
    pub num_subdomains: usize,
    pub seed: u64,
    /// Permits pairings other than ASM+additive/balanced and RAS+deflated.
    pub allow_any_pairing: bool,
}

impl Default for PreconditionerConfig {
    fn default() -> Self {
        Self {
            first_level: FirstLevel::Asm,
            second_level: SecondLevel::Balanced,
            tau: 0.6,
            cap: 300,
            num_subdomains: 4,
            seed: 0,
            allow_any_pairing: false,
        }
    }
}

impl PreconditionerConfig {
    pub fn one_level(first_level: FirstLevel, num_subdomains: usize) -> Self {
        Self {
            first_level,
            second_level: SecondLevel::None,
            num_subdomains,
            ..Self::default()
        }
    }

    pub fn two_level(first_level: FirstLevel, second_level: SecondLevel, num_subdomains: usize, tau: f64) -> Self {
        Self {
            first_level,
            second_level,
            num_subdomains,
            tau,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau.is_nan() || self.tau <= 0.0 {
            return Err(Error::InvalidInput(format!("tau must be positive, got {}", self.tau)));
        }
        if self.num_subdomains == 0 {
            return Err(Error::InvalidInput("need at least one subdomain".into()));
        }
        let paired = matches!(
            (self.first_level, self.second_level),
            (_, SecondLevel::None)
                | (FirstLevel::Asm, SecondLevel::Additive)
                | (FirstLevel::Asm, SecondLevel::Balanced)
                | (FirstLevel::Ras, SecondLevel::Deflated)
        );
        if !paired && !self.allow_any_pairing {
            return Err(Error::InvalidInput(format!(
                "{} is paired with {}; use asm with additive/balanced or ras with deflated, \
                 or allow other pairings explicitly",
                self.first_level, self.second_level
            )));
        }
        Ok(())
    }

    /// Whether the configured operator is symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.first_level == FirstLevel::Asm && self.second_level != SecondLevel::Deflated
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SetupTimings {
    pub partition: Duration,
    /// Summed over subdomains.
    pub eigensolve: Duration,
    pub setup: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct SetupStats {
    pub m: usize,
    pub n: usize,
    pub nnz_a: usize,
    pub nnz_c: usize,
    pub num_subdomains: usize,
    /// `nᵢ = |Ωᵢ|`.
    pub subdomain_sizes: Vec<usize>,
    pub interior_sizes: Vec<usize>,
    /// `pᵢ`, coarse vectors selected per subdomain.
    pub coarse_per_subdomain: Vec<usize>,
    pub n0: usize,
    pub dropped_coarse_columns: Vec<usize>,
    pub k_m: usize,
    pub k_c_greedy: usize,
    pub global_shift: f64,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub timings: SetupTimings,
}

pub struct Preconditioner {
    config: PreconditionerConfig,
    decomposition: Decomposition,
    subdomains: Vec<SubdomainData>,
    coarse: Option<CoarseSpace>,
    a: SparseMatrix,
    stats: SetupStats,
}

impl Preconditioner {
    /// Builds the preconditioner with the built-in partitioner.
    pub fn setup(a: &SparseMatrix, config: &PreconditionerConfig) -> Result<Self> {
        Self::build(a, config, None)
    }

    /// Builds the preconditioner from given interior column sets.
    pub fn setup_with_partition(
        a: &SparseMatrix,
        config: &PreconditionerConfig,
        interior: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if interior.len() != config.num_subdomains {
            return Err(Error::InvalidInput(format!(
                "partition has {} subdomains, configuration asks for {}",
                interior.len(),
                config.num_subdomains
            )));
        }
        Self::build(a, config, Some(interior))
    }

    fn build(a: &SparseMatrix, config: &PreconditionerConfig, interior: Option<Vec<Vec<usize>>>) -> Result<Self> {
        config.validate()?;
        let start = Instant::now();
        let c = a.normal_matrix()?;
        let global_shift = CONSTRUCTION_SHIFT * c.frobenius_norm();

        let t = Instant::now();
        let interior = match interior {
            Some(sets) => sets,
            None => partition_columns(&c, config.num_subdomains, config.seed)?,
        };
        let decomposition = Decomposition::build(a, interior)?;
        let partition_time = t.elapsed();

        let gevp = (config.second_level != SecondLevel::None).then_some(GevpParams {
            tau: config.tau,
            cap: config.cap,
        });
        let results: Vec<Result<SubdomainData>> = (0..decomposition.num_subdomains())
            .into_par_iter()
            .map(|i| SubdomainData::setup(a, &decomposition, i, global_shift, gevp))
            .collect();
        let subdomains = results.into_iter().collect::<Result<Vec<_>>>()?;
        let eigensolve = subdomains.iter().map(|s| s.eigensolve_time).sum();

        let mut warnings = Vec::new();
        let mut coarse = None;
        if gevp.is_some() {
            let assembled = assemble_coarse_basis(&decomposition, &subdomains);
            if assembled.basis.ncols() == 0 {
                let msg = format!(
                    "no eigenpair passed the threshold 1/tau = {}; falling back to the one-level method",
                    1.0 / config.tau
                );
                log::warn!("{msg}");
                warnings.push(msg);
            } else {
                let cs = factor_coarse(a, &assembled, global_shift)?;
                if !cs.dropped().is_empty() {
                    warnings.push(format!(
                        "rank filter dropped coarse columns {:?} of {}",
                        cs.dropped(),
                        assembled.basis.ncols()
                    ));
                }
                coarse = Some(cs);
            }
        }

        let stats = SetupStats {
            m: a.nrows(),
            n: a.ncols(),
            nnz_a: a.nnz(),
            nnz_c: c.nnz(),
            num_subdomains: decomposition.num_subdomains(),
            subdomain_sizes: subdomains.iter().map(SubdomainData::dim).collect(),
            interior_sizes: (0..decomposition.num_subdomains())
                .map(|i| decomposition.interior(i).len())
                .collect(),
            coarse_per_subdomain: subdomains.iter().map(SubdomainData::num_coarse).collect(),
            n0: coarse.as_ref().map_or(0, CoarseSpace::n0),
            dropped_coarse_columns: coarse.as_ref().map_or_else(Vec::new, |c| c.dropped().to_vec()),
            k_m: analysis::compute_km(decomposition.all_rows(), a.nrows()),
            k_c_greedy: analysis::estimate_kc(&decomposition, &c),
            global_shift,
            warnings,
            timings: SetupTimings {
                partition: partition_time,
                eigensolve,
                setup: start.elapsed(),
            },
        };
        Ok(Self {
            config: config.clone(),
            decomposition,
            subdomains,
            coarse,
            a: a.clone(),
            stats,
        })
    }

    pub fn config(&self) -> &PreconditionerConfig {
        &self.config
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn subdomains(&self) -> &[SubdomainData] {
        &self.subdomains
    }

    pub fn coarse(&self) -> Option<&CoarseSpace> {
        self.coarse.as_ref()
    }

    pub fn stats(&self) -> &SetupStats {
        &self.stats
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.a
    }

    /// Whether the operator actually applied is symmetric. A two-level
    /// configuration without coarse vectors runs its one-level part.
    pub fn is_symmetric(&self) -> bool {
        self.config.is_symmetric() && (self.coarse.is_some() || self.config.first_level == FirstLevel::Asm)
    }

    /// `Σ Rᵢᵀ C_ii⁻¹ Rᵢ v` (ASM) or `Σ Rᵢᵀ Dᵢ C_ii⁻¹ Rᵢ v` (RAS).
    pub fn apply_one_level(&self, v: &[f64]) -> Vec<f64> {
        self.one_level(self.config.first_level, v)
    }

    fn one_level(&self, kind: FirstLevel, v: &[f64]) -> Vec<f64> {
        let d = &self.decomposition;
        let locals: Vec<Vec<f64>> = self
            .subdomains
            .par_iter()
            .map(|sd| {
                let mut local = d.restrict(sd.index, v);
                sd.factor.solve_in_place(&mut local);
                if kind == FirstLevel::Ras {
                    for (x, w) in local.iter_mut().zip(d.weights(sd.index)) {
                        *x *= w;
                    }
                }
                local
            })
            .collect();
        // fixed-order reduction
        let mut out = vec![0.0; d.n()];
        for (sd, local) in self.subdomains.iter().zip(&locals) {
            d.prolong_add(sd.index, local, &mut out);
        }
        out
    }

    fn c_apply(&self, x: &[f64]) -> Vec<f64> {
        let mut ax = vec![0.0; self.a.nrows()];
        self.a.spmv_into(x, &mut ax);
        let mut out = vec![0.0; self.a.ncols()];
        self.a.spmv_transpose_into(&ax, &mut out);
        out
    }

    /// Two-level application; without a coarse space this is the one-level
    /// operator.
    pub fn apply_two_level(&self, v: &[f64]) -> Vec<f64> {
        let Some(cs) = &self.coarse else {
            return self.apply_one_level(v);
        };
        let first = self.config.first_level;
        let qv = cs.apply(v);
        match self.config.second_level {
            SecondLevel::None => self.apply_one_level(v),
            SecondLevel::Additive => {
                let mut out = self.one_level(first, v);
                crate::sparse::axpy(1.0, &qv, &mut out);
                out
            }
            SecondLevel::Balanced => {
                // Qv + (I − QC) M (I − CQ) v
                let cqv = self.c_apply(&qv);
                let t: Vec<f64> = v.iter().zip(&cqv).map(|(a, b)| a - b).collect();
                let y = self.one_level(first, &t);
                let qcy = cs.apply(&self.c_apply(&y));
                qv.iter()
                    .zip(&y)
                    .zip(&qcy)
                    .map(|((q, y), p)| q + y - p)
                    .collect()
            }
            SecondLevel::Deflated => {
                // Qv + M (I − CQ) v
                let cqv = self.c_apply(&qv);
                let t: Vec<f64> = v.iter().zip(&cqv).map(|(a, b)| a - b).collect();
                let mut out = self.one_level(first, &t);
                crate::sparse::axpy(1.0, &qv, &mut out);
                out
            }
        }
    }
}

impl LinearOperator for Preconditioner {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let out = if self.config.second_level == SecondLevel::None {
            self.apply_one_level(x)
        } else {
            self.apply_two_level(x)
        };
        y.copy_from_slice(&out);
    }
}

impl fmt::Debug for Preconditioner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Preconditioner")
            .field("config", &self.config)
            .field("n0", &self.stats.n0)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::problems::{grid_least_squares, random_sparse, random_vector, worked_example};
    use crate::sparse::dot;

    fn dense_columns(p: &Preconditioner, n: usize) -> oracle::Mat {
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            cols.push(p.apply_vec(&e));
        }
        oracle::transpose(&cols)
    }

    fn shifted_inverse(c: &oracle::Mat, idx: &[usize], shift: f64) -> oracle::Mat {
        let mut sub: oracle::Mat = idx.iter().map(|&i| idx.iter().map(|&j| c[i][j]).collect()).collect();
        for (k, row) in sub.iter_mut().enumerate() {
            row[k] += shift;
        }
        oracle::inverse(&sub)
    }

    /// Dense `M` from the defining formulas.
    fn dense_oracle(p: &Preconditioner, a: &SparseMatrix) -> oracle::Mat {
        let n = a.ncols();
        let ad = a.to_dense().to_rows();
        let c = oracle::gram(&ad);
        let d = p.decomposition();
        let shift = p.stats().global_shift;
        let ras = p.config().first_level == FirstLevel::Ras;
        let mut m1 = oracle::zeros(n, n);
        for i in 0..d.num_subdomains() {
            let omega = d.overlapping(i);
            let inv = shifted_inverse(&c, omega, shift);
            for (r, &gi) in omega.iter().enumerate() {
                let w = if ras { d.weights(i)[r] } else { 1.0 };
                for (s, &gj) in omega.iter().enumerate() {
                    m1[gi][gj] += w * inv[r][s];
                }
            }
        }
        let Some(cs) = p.coarse() else { return m1 };
        let b = cs.basis().to_dense().to_rows();
        let bt = oracle::transpose(&b);
        let mut c00 = oracle::matmul(&oracle::matmul(&bt, &c), &b);
        let btb = oracle::matmul(&bt, &b);
        for (r, row) in c00.iter_mut().enumerate() {
            for (s, v) in row.iter_mut().enumerate() {
                *v += shift * btb[r][s];
            }
        }
        let q = oracle::matmul(&oracle::matmul(&b, &oracle::inverse(&c00)), &bt);
        let mut i_cq = oracle::matmul(&c, &q);
        for (r, row) in i_cq.iter_mut().enumerate() {
            for v in row.iter_mut() {
                *v = -*v;
            }
            row[r] += 1.0;
        }
        let add = |x: &oracle::Mat, y: &oracle::Mat| -> oracle::Mat {
            x.iter().zip(y).map(|(p, q)| p.iter().zip(q).map(|(a, b)| a + b).collect()).collect()
        };
        match p.config().second_level {
            SecondLevel::None => m1,
            SecondLevel::Additive => add(&q, &m1),
            SecondLevel::Balanced => add(&q, &oracle::matmul(&oracle::matmul(&oracle::transpose(&i_cq), &m1), &i_cq)),
            SecondLevel::Deflated => add(&q, &oracle::matmul(&m1, &i_cq)),
        }
    }

    fn all_variants() -> Vec<(FirstLevel, SecondLevel)> {
        vec![
            (FirstLevel::Asm, SecondLevel::None),
            (FirstLevel::Ras, SecondLevel::None),
            (FirstLevel::Asm, SecondLevel::Additive),
            (FirstLevel::Asm, SecondLevel::Balanced),
            (FirstLevel::Ras, SecondLevel::Deflated),
        ]
    }

    #[test]
    fn pairing_rules() {
        let mut cfg = PreconditionerConfig::two_level(FirstLevel::Ras, SecondLevel::Balanced, 2, 0.6);
        assert!(cfg.validate().is_err());
        cfg.allow_any_pairing = true;
        assert!(cfg.validate().is_ok());
        let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Deflated, 2, 0.6);
        assert!(cfg.validate().is_err());
        let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Balanced, 2, 0.0);
        assert!(cfg.validate().is_err());
        assert!(PreconditionerConfig::one_level(FirstLevel::Ras, 3).validate().is_ok());
    }

    #[test]
    fn parses_names() {
        assert_eq!("RAS".parse::<FirstLevel>().unwrap(), FirstLevel::Ras);
        assert_eq!("balanced".parse::<SecondLevel>().unwrap(), SecondLevel::Balanced);
        assert!("schur".parse::<SecondLevel>().is_err());
    }

    #[test]
    fn matches_dense_composition() {
        let problems = [random_sparse(45, 24, 3, 11), grid_least_squares(5, 4, 3)];
        for a in &problems {
            for (first, second) in all_variants() {
                let cfg = PreconditionerConfig {
                    first_level: first,
                    second_level: second,
                    num_subdomains: 3,
                    tau: 0.6,
                    ..PreconditionerConfig::default()
                };
                let p = Preconditioner::setup(a, &cfg).unwrap();
                let got = dense_columns(&p, a.ncols());
                let want = dense_oracle(&p, a);
                let scale = oracle::max_abs(&want);
                for (gr, wr) in got.iter().zip(&want) {
                    for (g, w) in gr.iter().zip(wr) {
                        assert!((g - w).abs() <= 1e-9 * scale, "{first}/{second}: {g} vs {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_variants_are_symmetric_and_linear() {
        let a = random_sparse(150, 90, 3, 21);
        for (first, second) in all_variants() {
            let cfg = PreconditionerConfig {
                first_level: first,
                second_level: second,
                num_subdomains: 4,
                ..PreconditionerConfig::default()
            };
            let p = Preconditioner::setup(&a, &cfg).unwrap();
            assert_eq!(p.is_symmetric(), first == FirstLevel::Asm && second != SecondLevel::Deflated);
            let (x, y) = (random_vector(90, 1), random_vector(90, 2));
            let (mx, my) = (p.apply_vec(&x), p.apply_vec(&y));
            let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
            let mc = p.apply_vec(&combo);
            for k in 0..90 {
                let lin = 2.0 * mx[k] - 3.0 * my[k];
                assert!((mc[k] - lin).abs() <= 1e-10 * (1.0 + lin.abs()));
            }
            if p.is_symmetric() {
                let (l, r) = (dot(&y, &mx), dot(&x, &my));
                assert!((l - r).abs() <= 1e-11 * l.abs().max(r.abs()), "{first}/{second}: {l} vs {r}");
            }
        }
    }

    #[test]
    fn single_subdomain_is_exact_inverse() {
        let a = random_sparse(40, 20, 3, 4);
        let p = Preconditioner::setup(&a, &PreconditionerConfig::one_level(FirstLevel::Asm, 1)).unwrap();
        let c = oracle::gram(&a.to_dense().to_rows());
        let v = random_vector(20, 9);
        let mv = p.apply_vec(&v);
        let back = oracle::matvec(&c, &mv);
        for (p, q) in back.iter().zip(&v) {
            assert!((p - q).abs() < 1e-8);
        }
    }

    #[test]
    fn coarse_vectors_are_reproduced() {
        // M C z = z for z in the coarse space, for balanced and deflated
        let a = grid_least_squares(8, 5, 2);
        for (first, second) in [(FirstLevel::Asm, SecondLevel::Balanced), (FirstLevel::Ras, SecondLevel::Deflated)] {
            let cfg = PreconditionerConfig::two_level(first, second, 4, 0.6);
            let p = Preconditioner::setup(&a, &cfg).unwrap();
            let cs = p.coarse().expect("coarse space");
            let coeff = random_vector(cs.n0(), 5);
            let z = cs.basis().spmv(&coeff).unwrap();
            let cz = a.spmv_transpose(&a.spmv(&z).unwrap()).unwrap();
            let back = p.apply_vec(&cz);
            let scale = z.iter().fold(0.0f64, |m, e| m.max(e.abs()));
            for (p, q) in back.iter().zip(&z) {
                assert!((p - q).abs() <= 1e-6 * scale, "{second}: {p} vs {q}");
            }
        }
    }

    #[test]
    fn additive_is_positive_definite() {
        let a = random_sparse(50, 28, 3, 17);
        let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Additive, 3, 0.6);
        let p = Preconditioner::setup(&a, &cfg).unwrap();
        let m = oracle::symmetrize(&dense_columns(&p, 28));
        assert!(oracle::symmetric_eigenvalues(&m)[0] > 0.0);
    }

    #[test]
    fn falls_back_without_coarse_vectors() {
        // a tiny tau puts the threshold above every local eigenvalue
        let a = worked_example();
        let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Balanced, 2, 1e-6);
        let p = Preconditioner::setup_with_partition(&a, &cfg, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(p.coarse().is_none());
        assert_eq!(p.stats().n0, 0);
        assert_eq!(p.stats().warnings.len(), 1);
        let v = [1.0, -2.0, 0.5, 3.0];
        assert_eq!(p.apply_vec(&v), p.apply_one_level(&v));
    }

    #[test]
    fn stats_are_consistent() {
        let a = random_sparse(200, 120, 3, 33);
        let p = Preconditioner::setup(&a, &PreconditionerConfig::default()).unwrap();
        let s = p.stats();
        assert_eq!(s.n0, s.coarse_per_subdomain.iter().sum::<usize>() - s.dropped_coarse_columns.len());
        assert_eq!(s.interior_sizes.iter().sum::<usize>(), 120);
        assert!(s.k_m >= 1 && s.k_c_greedy >= 1);
        assert!(s.global_shift > 0.0);
    }

    #[test]
    fn apply_is_deterministic() {
        let a = random_sparse(300, 200, 3, 1);
        let cfg = PreconditionerConfig::two_level(FirstLevel::Asm, SecondLevel::Balanced, 8, 0.6);
        let p1 = Preconditioner::setup(&a, &cfg).unwrap();
        let p2 = Preconditioner::setup(&a, &cfg).unwrap();
        let v = random_vector(200, 3);
        let (y1, y2) = (p1.apply_vec(&v), p2.apply_vec(&v));
        assert!(y1.iter().zip(&y2).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}
