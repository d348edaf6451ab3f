//! Points of the space of norms: evaluation, homothety representatives,
//! and the group action with its translation formula.

use bruhat_tits::building::{act, class_equal, norm_equal, Apartment};
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::{FieldConfig, Val};

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(2)?;

    // The standard apartment in dimension 2, and the point with weights
    // (0, 1): the additive norm min(v(x_0), v(x_1) + 1).
    let apartment = Apartment::standard(2, cfg);
    let x = apartment.point(vec![Val::zero(), Val::from_integer(1)])?;

    println!("point: weights {:?} in the standard basis", x.weights());
    for vec in [[1i64, 0], [0, 1], [0, 2], [6, 4]] {
        let v: Vec<_> = vec
            .iter()
            .map(|&n| bruhat_tits::Rational::from_integer(n.into()))
            .collect();
        println!("  A({:?}) = {}", vec, x.eval_rational(&v)?);
    }

    // Homothety: shifting all weights gives the same class.
    let shifted = apartment.point(vec![Val::from_integer(5), Val::from_integer(6)])?;
    println!(
        "weights (5,6) describe the same class: {}",
        class_equal(&x, &shifted)?
    );
    println!(
        "  normalized representative has weights {:?}",
        shifted.normalize().weights()
    );

    // The translation formula: a diagonal matrix diag(λ_i) shifts the
    // weights by −v(λ_i).
    let g = Matrix::from_int_rows(&[vec![4, 0], vec![0, 1]], cfg)?;
    let gx = act(&g, &x)?;
    println!(
        "diag(4,1) · (0,1) = class with normalized weights {:?}",
        gx.weights()
    );

    // A unimodular matrix fixes the standard vertex as a norm.
    let o = apartment.point(vec![Val::zero(), Val::zero()])?;
    let u = Matrix::from_int_rows(&[vec![1, 7], vec![0, 1]], cfg)?;
    println!(
        "unimodular shear fixes the standard vertex: {}",
        norm_equal(&act(&u, &o)?, &o)?
    );
    Ok(())
}
