//! Partitioning the column graph and inspecting the overlapping
//! decomposition it induces.
//!
//! ```bash
//! cargo run --example partitioning
//! ```

use ls_schwarz::analysis::{compute_km, estimate_kc, neighbour_counts};
use ls_schwarz::decomposition::{partition_columns, write_partition_file, Decomposition};
use ls_schwarz::problems::grid_least_squares;

fn main() -> ls_schwarz::Result<()> {
    let a = grid_least_squares(16, 6, 1);
    let c = a.normal_matrix()?;
    for parts in [2, 4, 8] {
        let interior = partition_columns(&c, parts, 0)?;
        let d = Decomposition::build(&a, interior)?;
        let sizes: Vec<(usize, usize)> = (0..parts).map(|i| (d.interior(i).len(), d.boundary(i).len())).collect();
        println!(
            "N={parts}: (interior, boundary) {sizes:?}, k_m = {}, greedy k_c = {}, neighbours {:?}",
            compute_km(d.all_rows(), a.nrows()),
            estimate_kc(&d, &c),
            neighbour_counts(&d)
        );
    }

    let interior = partition_columns(&c, 4, 0)?;
    let mut ids = vec![0; a.ncols()];
    for (part, cols) in interior.iter().enumerate() {
        for &j in cols {
            ids[j] = part;
        }
    }
    let path = std::env::temp_dir().join("grid16.parts");
    write_partition_file(&path, &ids)?;
    println!("partition written to {} (usable with `run --partition`)", path.display());
    Ok(())
}
