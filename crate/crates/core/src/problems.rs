//! Test problem generators shared by the examples, tests and the harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sparse::SparseMatrix;

/// The 5×4 matrix used throughout as a worked example of the overlap
/// construction.
pub fn worked_example() -> SparseMatrix {
    SparseMatrix::from_dense_rows(&[
        vec![1.0, 0.0, 6.0, 0.0],
        vec![2.0, 4.0, 0.0, 0.0],
        vec![3.0, 0.0, 0.0, 0.0],
        vec![0.0, 5.0, 0.0, 7.0],
        vec![0.0, 0.0, 0.0, 8.0],
    ])
    .expect("static matrix")
}

/// Seeded uniform(-1, 1) vector.
pub fn random_vector(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Random sparse `m × n` matrix (`m ≥ n`) with about `per_row` entries per
/// row. Row `j < n` carries a dominant entry in column `j`, which keeps the
/// matrix full column rank.
pub fn random_sparse(m: usize, n: usize, per_row: usize, seed: u64) -> SparseMatrix {
    assert!(m >= n, "random_sparse expects m >= n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::with_capacity(m * (per_row + 1));
    for r in 0..m {
        if r < n {
            triplets.push((r, r, 2.0 + rng.gen::<f64>()));
        }
        for _ in 0..per_row {
            let c = rng.gen_range(0..n);
            triplets.push((r, c, rng.gen_range(-1.0..1.0)));
        }
    }
    SparseMatrix::from_triplets(m, n, triplets).expect("indices in range")
}

/// Least-squares fit of a field on a `k × k` grid from its finite
/// differences plus a handful of point observations.
///
/// Rows are the horizontal and vertical differences `w (u_p − u_q)` with
/// random weights in `[0.1, 1]`, followed by one observation row per
/// `anchor_stride`-th node. The normal matrix is a weighted graph Laplacian
/// plus a sparse diagonal, so its conditioning degrades like `k²`; this is the
/// regime where a coarse space pays off.
pub fn grid_least_squares(k: usize, anchor_stride: usize, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let node = |i: usize, j: usize| i * k + j;
    let mut triplets = Vec::new();
    let mut row = 0;
    for i in 0..k {
        for j in 0..k {
            for (di, dj) in [(0usize, 1usize), (1, 0)] {
                let (ii, jj) = (i + di, j + dj);
                if ii < k && jj < k {
                    let w = rng.gen_range(0.1..1.0);
                    triplets.push((row, node(i, j), w));
                    triplets.push((row, node(ii, jj), -w));
                    row += 1;
                }
            }
        }
    }
    for p in (0..k * k).step_by(anchor_stride.max(1)) {
        triplets.push((row, p, 1.0));
        row += 1;
    }
    SparseMatrix::from_triplets(row, k * k, triplets).expect("indices in range")
}

/// Tridiagonal-difference operator of a path with `n` nodes plus one anchor
/// row; its normal matrix is a 1D Laplacian with a unit corner.
pub fn path_least_squares(n: usize) -> SparseMatrix {
    let mut triplets = Vec::new();
    for i in 0..n - 1 {
        triplets.push((i, i, 1.0));
        triplets.push((i, i + 1, -1.0));
    }
    triplets.push((n - 1, 0, 1.0));
    SparseMatrix::from_triplets(n, n, triplets).expect("indices in range")
}
