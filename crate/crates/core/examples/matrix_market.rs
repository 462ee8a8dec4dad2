//! Reading a Matrix Market file, forming `AᵀA`, and writing both back out.
//!
//! ```bash
//! cargo run --example matrix_market -- path/to/matrix.mtx
//! ```

use ls_schwarz::sparse::mm::{read_matrix_market, write_matrix_market, Symmetry};

fn main() -> ls_schwarz::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/bfwb62.mtx").to_string());
    let a = read_matrix_market(&path)?;
    println!("{path}: {} x {}, {} stored entries", a.nrows(), a.ncols(), a.nnz());

    let c = a.normal_matrix()?;
    println!("AᵀA: {} entries, ‖AᵀA‖_F = {:.6e}, symmetric: {}", c.nnz(), c.frobenius_norm(), c.is_symmetric());

    let dir = std::env::temp_dir();
    let out = dir.join("normal_matrix.mtx");
    write_matrix_market(&out, &c, Symmetry::Symmetric)?;
    let back = read_matrix_market(&out)?;
    assert_eq!(back, c);
    println!("wrote and re-read {}", out.display());
    Ok(())
}
