//! Column partitioning, overlap construction and the algebraic partition of
//! unity.
//!
//! A subdomain `i` is described by
//! * its interior columns `Ω_Ii` (disjoint across subdomains, sorted),
//! * the rows `rowsᵢ` of `A` that touch the interior,
//! * the boundary columns `Ω_Γi`: columns reached by `rowsᵢ` outside `Ω_Ii`,
//! * the overlapping set `Ωᵢ = [Ω_Ii, Ω_Γi]`, interior first,
//! * weights `Dᵢ`: 1 on interior positions, 0 on boundary positions.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    n: usize,
    m: usize,
    interior: Vec<Vec<usize>>,
    boundary: Vec<Vec<usize>>,
    overlapping: Vec<Vec<usize>>,
    rows: Vec<Vec<usize>>,
    weights: Vec<Vec<f64>>,
}

impl Decomposition {
    /// Builds overlaps, row sets and weights for the given interior sets.
    ///
    /// The interior sets must be nonempty and form a disjoint cover of the
    /// columns of `a`.
    pub fn build(a: &SparseMatrix, interior: Vec<Vec<usize>>) -> Result<Self> {
        let n = a.ncols();
        let mut owner = vec![usize::MAX; n];
        for (i, set) in interior.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidInput(format!("subdomain {i} has no interior columns")));
            }
            for &c in set {
                if c >= n {
                    return Err(Error::IndexOutOfRange { index: c, dim: n });
                }
                if owner[c] != usize::MAX {
                    return Err(Error::DuplicateIndex(c));
                }
                owner[c] = i;
            }
        }
        if let Some(c) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidInput(format!("column {c} belongs to no subdomain")));
        }

        let at = a.transpose();
        let mut interior = interior;
        let mut boundary = Vec::with_capacity(interior.len());
        let mut overlapping = Vec::with_capacity(interior.len());
        let mut rows = Vec::with_capacity(interior.len());
        let mut weights = Vec::with_capacity(interior.len());
        for set in interior.iter_mut() {
            set.sort_unstable();
            let (r, g) = overlap_with_transpose(a, &at, set);
            let mut omega = set.clone();
            omega.extend_from_slice(&g);
            weights.push(build_partition_of_unity(omega.len(), set.len()));
            overlapping.push(omega);
            boundary.push(g);
            rows.push(r);
        }
        Ok(Self {
            n,
            m: a.nrows(),
            interior,
            boundary,
            overlapping,
            rows,
            weights,
        })
    }

    /// Partitions the graph of `C = AᵀA` and builds the decomposition.
    pub fn from_matrix(a: &SparseMatrix, c: &SparseMatrix, parts: usize, seed: u64) -> Result<Self> {
        let interior = partition_columns(c, parts, seed)?;
        Self::build(a, interior)
    }

    pub fn num_subdomains(&self) -> usize {
        self.interior.len()
    }

    /// Number of columns of `A`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows of `A`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn interior(&self, i: usize) -> &[usize] {
        &self.interior[i]
    }

    pub fn boundary(&self, i: usize) -> &[usize] {
        &self.boundary[i]
    }

    /// `Ωᵢ`, interior first then boundary.
    pub fn overlapping(&self, i: usize) -> &[usize] {
        &self.overlapping[i]
    }

    pub fn rows(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn all_rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn all_overlapping(&self) -> &[Vec<usize>] {
        &self.overlapping
    }

    pub fn weights(&self, i: usize) -> &[f64] {
        &self.weights[i]
    }

    /// `Rᵢ u`.
    pub fn restrict(&self, i: usize, u: &[f64]) -> Vec<f64> {
        self.overlapping[i].iter().map(|&k| u[k]).collect()
    }

    /// `y += Rᵢᵀ uᵢ`.
    pub fn prolong_add(&self, i: usize, local: &[f64], y: &mut [f64]) {
        for (&k, &v) in self.overlapping[i].iter().zip(local) {
            y[k] += v;
        }
    }

    /// Subdomain id owning each column.
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.n];
        for (i, set) in self.interior.iter().enumerate() {
            for &c in set {
                owner[c] = i;
            }
        }
        owner
    }
}

/// Rows touching `interior` and the boundary columns those rows reach.
///
/// `rows` are the nonzero rows of `A(:, Ω_I)`; `Ω_Γ` are the nonzero columns
/// of `A(rows, :)` not in `Ω_I`. Both come back sorted.
pub fn build_overlap(a: &SparseMatrix, interior: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    for &c in interior {
        if c >= a.ncols() {
            return Err(Error::IndexOutOfRange { index: c, dim: a.ncols() });
        }
    }
    Ok(overlap_with_transpose(a, &a.transpose(), interior))
}

fn overlap_with_transpose(a: &SparseMatrix, at: &SparseMatrix, interior: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut row_mark = vec![false; a.nrows()];
    let mut rows = Vec::new();
    for &c in interior {
        for &r in at.row(c).0 {
            if !row_mark[r] {
                row_mark[r] = true;
                rows.push(r);
            }
        }
    }
    rows.sort_unstable();
    let mut col_mark = vec![false; a.ncols()];
    for &c in interior {
        col_mark[c] = true;
    }
    let mut boundary = Vec::new();
    for &r in &rows {
        for &c in a.row(r).0 {
            if !col_mark[c] {
                col_mark[c] = true;
                boundary.push(c);
            }
        }
    }
    boundary.sort_unstable();
    (rows, boundary)
}

/// Weights `Dᵢ` for a subdomain with `len` overlapping columns of which the
/// first `n_interior` are interior: ones then zeros.
pub fn build_partition_of_unity(len: usize, n_interior: usize) -> Vec<f64> {
    assert!(n_interior <= len);
    let mut d = vec![0.0; len];
    d[..n_interior].fill(1.0);
    d
}

/// `R u`: entries of `u` at the positions of `omega`, in order.
pub fn restrict(omega: &[usize], u: &[f64]) -> Result<Vec<f64>> {
    omega
        .iter()
        .map(|&k| u.get(k).copied().ok_or(Error::IndexOutOfRange { index: k, dim: u.len() }))
        .collect()
}

/// `Rᵀ uᵢ` as a length-`n` vector, zero outside `omega`.
pub fn prolong(omega: &[usize], local: &[f64], n: usize) -> Result<Vec<f64>> {
    check_len("prolong local vector", omega.len(), local.len())?;
    let mut y = vec![0.0; n];
    for (&k, &v) in omega.iter().zip(local) {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        y[k] = v;
    }
    Ok(y)
}

/// Greedy graph-growing k-way partition of the graph of `C`.
///
/// The first part grows by breadth-first search from a pseudo-peripheral
/// vertex found from a seeded random start. Each following part grows from
/// the unassigned vertex on the frontier of the already assigned region that
/// has the fewest unassigned neighbours. Part sizes are exactly `⌊n/N⌋` or
/// `⌈n/N⌉`; disconnected leftovers are picked up by restarting the search.
pub fn partition_columns(c: &SparseMatrix, parts: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    let n = c.nrows();
    if c.ncols() != n {
        return Err(Error::InvalidInput("partitioning needs a square matrix".into()));
    }
    if parts == 0 || parts > n {
        return Err(Error::InvalidInput(format!(
            "cannot split {n} columns into {parts} nonempty subdomains"
        )));
    }
    const FREE: usize = usize::MAX;
    let neighbours = |v: usize| c.row(v).0.iter().copied().filter(move |&w| w != v);
    let mut owner = vec![FREE; n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start0 = rng.gen_range(0..n);

    for p in 0..parts {
        let target = n / parts + usize::from(p < n % parts);
        if p + 1 == parts {
            for o in owner.iter_mut().filter(|o| **o == FREE) {
                *o = p;
            }
            break;
        }
        let mut start = if p == 0 {
            pseudo_peripheral(c, &owner, start0)
        } else {
            frontier_start(c, &owner)
        };
        let mut taken = 0;
        let mut queue = VecDeque::new();
        let mut queued = vec![false; n];
        while taken < target {
            if queue.is_empty() {
                queue.push_back(start);
                queued[start] = true;
            }
            while let Some(v) = queue.pop_front() {
                if owner[v] != FREE {
                    continue;
                }
                owner[v] = p;
                taken += 1;
                if taken == target {
                    break;
                }
                for w in neighbours(v) {
                    if owner[w] == FREE && !queued[w] {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if taken < target {
                // component exhausted; restart from another free vertex
                let free = owner.iter().position(|&o| o == FREE).expect("free vertices remain");
                start = pseudo_peripheral(c, &owner, free);
                queue.clear();
            }
        }
    }

    let mut sets = vec![Vec::new(); parts];
    for (v, &o) in owner.iter().enumerate() {
        sets[o].push(v);
    }
    Ok(sets)
}

fn frontier_start(c: &SparseMatrix, owner: &[usize]) -> usize {
    let free_degree = |v: usize| c.row(v).0.iter().filter(|&&w| w != v && owner[w] == usize::MAX).count();
    let frontier = (0..owner.len())
        .filter(|&v| owner[v] == usize::MAX)
        .filter(|&v| c.row(v).0.iter().any(|&w| owner[w] != usize::MAX));
    frontier
        .min_by_key(|&v| (free_degree(v), v))
        .or_else(|| owner.iter().position(|&o| o == usize::MAX))
        .expect("free vertices remain")
}

/// Repeated BFS towards the farthest free vertex until the eccentricity
/// stops growing.
fn pseudo_peripheral(c: &SparseMatrix, owner: &[usize], start: usize) -> usize {
    let n = owner.len();
    let mut v = start;
    let mut ecc = 0;
    for _ in 0..8 {
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::from([v]);
        dist[v] = 0;
        let mut far = v;
        while let Some(x) = queue.pop_front() {
            let better = dist[x] > dist[far] || (dist[x] == dist[far] && x < far);
            if better {
                far = x;
            }
            for &w in c.row(x).0 {
                if owner[w] == usize::MAX && dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[far] <= ecc {
            break;
        }
        ecc = dist[far];
        v = far;
    }
    v
}

/// Reads a partition file: one line per column holding its subdomain id.
pub fn read_partition_file(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut ids = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        ids.push(
            t.parse::<usize>()
                .map_err(|_| Error::parse(path, i + 1, format!("bad subdomain id '{t}'")))?,
        );
    }
    Ok(ids)
}

pub fn write_partition_file(path: impl AsRef<Path>, ids: &[usize]) -> Result<()> {
    let mut out = String::new();
    for id in ids {
        writeln!(out, "{id}").unwrap();
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Groups columns by subdomain id. Every id in `0..parts` must occur.
pub fn parts_from_ids(ids: &[usize], n: usize, parts: usize) -> Result<Vec<Vec<usize>>> {
    check_len("partition length", n, ids.len())?;
    let mut sets = vec![Vec::new(); parts];
    for (c, &id) in ids.iter().enumerate() {
        if id >= parts {
            return Err(Error::InvalidInput(format!(
                "column {c} assigned to subdomain {id}, expected an id below {parts}"
            )));
        }
        sets[id].push(c);
    }
    if let Some(empty) = sets.iter().position(Vec::is_empty) {
        return Err(Error::InvalidInput(format!("subdomain {empty} is empty")));
    }
    Ok(sets)
}
