//! The (p+1)-regular lattice tree in rank 2: neighbor enumeration, sphere
//! counts, geodesics, and DOT export.

use bruhat_tits::cli::export_dot;
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::FieldConfig;
use bruhat_tits::tree::{ball, canonical_vertex, neighbors, path, TreeVertex};

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(2)?;
    let root = TreeVertex::standard(cfg)?;

    println!("neighbors of the standard vertex (p = 2):");
    for n in neighbors(&root) {
        println!("  {}", n.key_string());
    }

    let b = ball(&root, 4, 100_000)?;
    println!("\nball of radius 4: {} vertices", b.vertices.len());
    println!("sphere sizes: {:?}", b.sphere_sizes);
    println!("edges: {} (= vertices − 1)", b.edges.len());

    // Geodesic from the standard lattice to the class of diag(8, 1).
    let far = canonical_vertex(&Matrix::from_int_rows(&[vec![8, 0], vec![0, 1]], cfg)?)?;
    println!("\ngeodesic to {}:", far.key_string());
    for v in path(&root, &far)? {
        println!("  {}", v.key_string());
    }

    // Deterministic DOT output for a small ball.
    let small = ball(&root, 1, 100)?;
    println!("\nDOT of the radius-1 ball:\n{}", export_dot(&small));
    Ok(())
}
