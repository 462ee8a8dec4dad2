//! Multiplicity and colouring constants, Lanczos estimates of the
//! preconditioned spectrum, and checks of the splitting inequalities and
//! of the two-level condition-number bound.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::Decomposition;
use crate::operator::LinearOperator;
use crate::sparse::{axpy, dot, norm2, SparseMatrix};
use crate::subdomain::SubdomainData;

/// Default number of Lanczos steps for spectrum estimates.
pub const LANCZOS_STEPS: usize = 200;
/// Relative slack allowed on the estimated condition number.
pub const ESTIMATOR_SLACK: f64 = 0.05;
/// Relative slack of the quadratic-form checks, times `uᵀCu`.
pub const SPLITTING_SLACK: f64 = 1e-12;

/// `m_j = #{i : j ∈ rowsᵢ}` for every row `j < m`.
pub fn row_multiplicities(rows: &[Vec<usize>], m: usize) -> Vec<usize> {
    let mut count = vec![0; m];
    for set in rows {
        for &j in set {
            count[j] += 1;
        }
    }
    count
}

/// `k_m = max_j m_j`; at least 1.
pub fn compute_km(rows: &[Vec<usize>], m: usize) -> usize {
    row_multiplicities(rows, m).into_iter().max().unwrap_or(0).max(1)
}

/// `k_Ωᵢ = #{j : Ωᵢ ∩ Ωⱼ ≠ ∅}`, counting `i` itself.
pub fn neighbour_counts(decomposition: &Decomposition) -> Vec<usize> {
    let members = membership(decomposition);
    (0..decomposition.num_subdomains())
        .map(|i| {
            let mut seen = vec![false; decomposition.num_subdomains()];
            for &p in decomposition.overlapping(i) {
                for &k in &members[p] {
                    seen[k] = true;
                }
            }
            seen.into_iter().filter(|&s| s).count()
        })
        .collect()
}

fn membership(decomposition: &Decomposition) -> Vec<Vec<usize>> {
    let mut members = vec![Vec::new(); decomposition.n()];
    for i in 0..decomposition.num_subdomains() {
        for &p in decomposition.overlapping(i) {
            members[p].push(i);
        }
    }
    members
}

/// Adjacency of subdomains whose column spaces are not `C`-orthogonal,
/// i.e. `C(Ωᵢ, Ωⱼ) ≠ 0`. Every pair with `Ωᵢ ∩ Ωⱼ ≠ ∅` is included since
/// `C` has a positive diagonal.
pub fn coupling_graph(decomposition: &Decomposition, c: &SparseMatrix) -> Vec<Vec<usize>> {
    let members = membership(decomposition);
    let nsub = decomposition.num_subdomains();
    (0..nsub)
        .map(|i| {
            let mut seen = vec![false; nsub];
            for &p in decomposition.overlapping(i) {
                seen_from(&members, c, p, &mut seen);
            }
            seen[i] = false;
            (0..nsub).filter(|&k| seen[k]).collect()
        })
        .collect()
}

fn seen_from(members: &[Vec<usize>], c: &SparseMatrix, p: usize, seen: &mut [bool]) {
    for &k in &members[p] {
        seen[k] = true;
    }
    let (cols, vals) = c.row(p);
    for (&q, &v) in cols.iter().zip(vals) {
        if v != 0.0 {
            for &k in &members[q] {
                seen[k] = true;
            }
        }
    }
}

/// Greedy largest-degree-first colouring of the coupling graph; returns the
/// colour of every subdomain.
pub fn greedy_coloring(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..adjacency.len()).collect();
    order.sort_by(|&a, &b| adjacency[b].len().cmp(&adjacency[a].len()).then(a.cmp(&b)));
    let mut colour = vec![usize::MAX; adjacency.len()];
    for v in order {
        let mut used = vec![false; adjacency[v].len() + 1];
        for &u in &adjacency[v] {
            if colour[u] < used.len() {
                used[colour[u]] = true;
            }
        }
        colour[v] = used.iter().position(|&t| !t).unwrap_or(used.len());
    }
    colour
}

/// Upper bound on `k_c`: colours used by [`greedy_coloring`] on the
/// coupling graph.
pub fn estimate_kc(decomposition: &Decomposition, c: &SparseMatrix) -> usize {
    let colour = greedy_coloring(&coupling_graph(decomposition, c));
    colour.iter().max().map_or(0, |m| m + 1)
}

/// `(k_c + 1)(2 + (2k_c + 1) k_m / τ)`.
pub fn theoretical_bound(k_c: usize, k_m: usize, tau: f64) -> f64 {
    let (kc, km) = (k_c as f64, k_m as f64);
    (kc + 1.0) * (2.0 + (2.0 * kc + 1.0) * km / tau)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEstimate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub steps: usize,
    /// Lanczos stopped early on a tiny or non-finite off-diagonal.
    pub breakdown: bool,
}

impl SpectrumEstimate {
    pub fn condition(&self) -> f64 {
        self.lambda_max / self.lambda_min
    }
}

/// Extreme Ritz values of `M C`, which is self-adjoint in the `C` inner
/// product when `M` is symmetric. Full reorthogonalization; `steps` is
/// capped at the dimension.
pub fn estimate_preconditioned_spectrum(
    m: &dyn LinearOperator,
    c: &dyn LinearOperator,
    steps: usize,
    seed: u64,
) -> SpectrumEstimate {
    let n = c.dim();
    let steps = steps.min(n).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut p = c.apply_vec(&q);
    let norm = dot(&q, &p).sqrt();
    q.iter_mut().for_each(|e| *e /= norm);
    p.iter_mut().for_each(|e| *e /= norm);

    // qs are C-orthonormal; ps = C qs.
    let mut qs: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut ps: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alphas = Vec::with_capacity(steps);
    let mut betas: Vec<f64> = Vec::with_capacity(steps);
    let mut breakdown = false;
    let mut w = vec![0.0; n];
    for j in 0..steps {
        m.apply(&p, &mut w);
        let alpha = dot(&w, &p);
        alphas.push(alpha);
        qs.push(q);
        ps.push(p);
        if j + 1 == steps {
            break;
        }
        // full reorthogonalization, twice
        for _ in 0..2 {
            for (qi, pi) in qs.iter().zip(&ps) {
                let h = dot(&w, pi);
                axpy(-h, qi, &mut w);
            }
        }
        let cw = c.apply_vec(&w);
        let beta2 = dot(&w, &cw);
        let scale = alphas.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if !(beta2.is_finite()) || beta2 <= (1e-13 * scale).powi(2) {
            breakdown = true;
            break;
        }
        let beta = beta2.sqrt();
        betas.push(beta);
        q = w.iter().map(|e| e / beta).collect();
        p = cw.iter().map(|e| e / beta).collect();
    }

    let k = alphas.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let ev = SymmetricEigen::new(t).eigenvalues;
    let lambda_min = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let lambda_max = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    SpectrumEstimate {
        lambda_min,
        lambda_max,
        steps: k,
        breakdown: breakdown && k < n,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub k_m: usize,
    pub k_c_greedy: usize,
    pub tau: f64,
    pub theoretical_bound: f64,
    pub lambda_min_est: f64,
    pub lambda_max_est: f64,
    pub kappa_est: f64,
    pub lanczos_steps: usize,
    pub approximate: bool,
    /// `None` when the bound does not cover the preconditioner variant.
    pub verified: Option<bool>,
}

impl BoundReport {
    /// `applies` selects whether the bound covers the variant the spectrum
    /// was measured on (two-level additive).
    pub fn new(k_m: usize, k_c: usize, tau: f64, spectrum: &SpectrumEstimate, applies: bool) -> Self {
        let bound = theoretical_bound(k_c, k_m, tau);
        let kappa = spectrum.condition();
        Self {
            k_m,
            k_c_greedy: k_c,
            tau,
            theoretical_bound: bound,
            lambda_min_est: spectrum.lambda_min,
            lambda_max_est: spectrum.lambda_max,
            kappa_est: kappa,
            lanczos_steps: spectrum.steps,
            approximate: spectrum.breakdown,
            verified: applies.then_some(kappa <= bound * (1.0 + ESTIMATOR_SLACK)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplittingCheck {
    pub trials: usize,
    pub k_m: usize,
    pub holds: bool,
    /// Largest violation relative to `uᵀCu` (≤ 0 when everything holds).
    pub worst_relative_violation: f64,
    /// First vector that violated an inequality.
    pub witness: Option<Vec<f64>>,
    pub witness_subdomain: Option<usize>,
}

/// Checks `0 ≤ uᵀC̃ᵢu ≤ uᵀCu` for every subdomain and
/// `Σᵢ uᵀC̃ᵢu ≤ k_m uᵀCu` on `trials` random unit vectors, with slack
/// `SPLITTING_SLACK · uᵀCu`. `C̃ᵢ` is the assembled local matrix of each
/// subdomain.
pub fn verify_splitting(
    a: &SparseMatrix,
    decomposition: &Decomposition,
    subdomains: &[SubdomainData],
    trials: usize,
    seed: u64,
) -> SplittingCheck {
    let k_m = compute_km(decomposition.all_rows(), a.nrows());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let mut witness_subdomain = None;
    for _ in 0..trials {
        let mut u: Vec<f64> = (0..a.ncols()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let nu = norm2(&u);
        u.iter_mut().for_each(|e| *e /= nu);
        let au = a.spmv(&u).expect("length matches");
        let ucu = dot(&au, &au);
        let slack = SPLITTING_SLACK * ucu;
        let mut total = 0.0;
        let mut violated = None;
        for sd in subdomains {
            let local = decomposition.restrict(sd.index, &u);
            let q = dot(&local, &sd.c_tilde_ii.matvec(&local));
            total += q;
            let v = (-q).max(q - ucu);
            worst = worst.max(v / ucu.max(f64::MIN_POSITIVE));
            if v > slack && violated.is_none() {
                violated = Some(Some(sd.index));
            }
        }
        let v = total - k_m as f64 * ucu;
        worst = worst.max(v / ucu.max(f64::MIN_POSITIVE));
        if v > slack && violated.is_none() {
            violated = Some(None);
        }
        if let Some(sub) = violated {
            if witness.is_none() {
                witness = Some(u);
                witness_subdomain = sub;
            }
        }
    }
    SplittingCheck {
        trials,
        k_m,
        holds: witness.is_none(),
        worst_relative_violation: worst,
        witness,
        witness_subdomain,
    }
}
