//! Relative positions, exact CAT(0) distances, and reduction to a
//! fundamental Weyl chamber — including points that need a ramified
//! extension to be co-diagonalized.

use bruhat_tits::building::{
    common_basis, distance2, reduce_to_chamber, relpos, BuildingPoint,
};
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::{FieldConfig, Val};

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(2)?;
    let o = BuildingPoint::standard_vertex(2, cfg);

    // A point not diagonalized by the standard basis.
    let y = BuildingPoint::new(
        Matrix::from_int_rows(&[vec![1, 1], vec![0, 1]], cfg)?,
        vec![Val::zero(), Val::from_integer(2)],
    )?;

    let fmt = |deltas: &[bruhat_tits::Rational]| {
        deltas.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
    };
    let rp = relpos(&o, &y)?;
    println!("relative position deltas: [{}]", fmt(rp.deltas()));
    println!("mean-centered: [{}]", fmt(rp.centered().deltas()));
    println!("distance² = {}", distance2(&o, &y)?);
    println!(
        "chamber representative: [{}]",
        fmt(reduce_to_chamber(&y, &o)?.deltas())
    );

    // Half-integral weights force the common basis into k_2.
    let a = BuildingPoint::standard_vertex(3, cfg);
    let b = BuildingPoint::new(
        Matrix::identity(3, cfg),
        vec![
            Val::Finite(bruhat_tits::Rational::new((-1).into(), 2.into())),
            Val::zero(),
            Val::Finite(bruhat_tits::Rational::new(1.into(), 2.into())),
        ],
    )?;
    let cb = common_basis(&a, &b)?;
    println!(
        "\nhalf-integral weights: common basis lives over {}",
        cb.basis.config()
    );
    println!("relpos = [{}]", fmt(relpos(&a, &b)?.deltas()));
    println!("distance² = {}", distance2(&a, &b)?);
    Ok(())
}
