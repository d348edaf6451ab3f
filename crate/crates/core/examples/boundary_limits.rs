//! The seminorm boundary: walking a weight ray to infinity, reading off
//! the stratum, and testing boundary stabilizers.

use bruhat_tits::building::{act, BuildingPoint};
use bruhat_tits::compactification::{
    boundary_stab_check, quotient_embed, ray_limit, seminorm_equal, stratum_of,
};
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::{FieldConfig, Rational};

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(3)?;
    let x = BuildingPoint::standard_vertex(3, cfg);

    // Push the weights along direction (0, 1, 2): coordinates 1 and 2
    // blow up, leaving a seminorm with kernel span(e_1, e_2).
    let dir: Vec<Rational> = [0i64, 1, 2]
        .iter()
        .map(|&n| Rational::from_integer(n.into()))
        .collect();
    let limit = ray_limit(&x, &dir)?;
    println!("ray limit weights: {:?}", limit.weights());

    let stratum = stratum_of(&limit);
    println!("kernel dimension: {}", stratum.kernel_dim());
    println!(
        "quotient point weights: {:?}",
        stratum.quotient_point().weights()
    );

    // Rebuild the boundary point from its stratum data.
    let full = Matrix::identity(3, cfg);
    let back = quotient_embed(&stratum, &full)?;
    println!(
        "rebuild from stratum gives the same seminorm class: {}",
        seminorm_equal(&back, &limit)?
    );

    // Stabilizers of the boundary class: must preserve the kernel and fix
    // the quotient class.
    let keeps_kernel = Matrix::from_int_rows(
        &[vec![2, 0, 0], vec![1, 1, 4], vec![5, 0, 1]],
        cfg,
    )?;
    let moves_kernel = Matrix::from_int_rows(
        &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]],
        cfg,
    )?;
    for (name, g) in [("block-triangular", keeps_kernel), ("kernel-moving", moves_kernel)] {
        let predicate = boundary_stab_check(&g, &limit)?;
        let direct = seminorm_equal(&act(&g, &limit)?, &limit)?;
        println!("{}: predicate {} / direct action {}", name, predicate, direct);
    }
    Ok(())
}
