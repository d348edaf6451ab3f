//! Extending a point to a multiplicative seminorm on polynomials: Gauss
//! evaluation, multiplicativity, and recovery of the point from the
//! degree-one part.

use bruhat_tits::building::BuildingPoint;
use bruhat_tits::compactification::{eval_poly, poly_change_basis, Polynomial};
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::{FieldConfig, Rational, Val};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(2)?;
    let x = BuildingPoint::new(
        Matrix::identity(3, cfg),
        vec![Val::zero(), Val::from_integer(1), Val::Infinite],
    )?;

    let x0 = Polynomial::variable(0, 3);
    let x1 = Polynomial::variable(1, 3);
    let x2 = Polynomial::variable(2, 3);

    // f = x_0² + 2·x_1², g = x_0·x_1 + 4.
    let f = x0.pow(2).add(&x1.pow(2).scale(&rat(2, 1)));
    let g = x0.mul(&x1).add(&Polynomial::constant(rat(4, 1), 3));

    println!("j(x)(f)   = {}", eval_poly(&x, &f));
    println!("j(x)(g)   = {}", eval_poly(&x, &g));
    println!("j(x)(f·g) = {}", eval_poly(&x, &f.mul(&g)));
    println!(
        "multiplicative: {}",
        eval_poly(&x, &f.mul(&g)) == eval_poly(&x, &f).plus(&eval_poly(&x, &g))
    );

    // The kernel variable evaluates to +∞, and so does any multiple.
    println!("j(x)(x_2) = {}", eval_poly(&x, &x2));
    println!("j(x)(x_2·f) = {}", eval_poly(&x, &x2.mul(&f)));

    // Degree-one restriction recovers the point: a standard-coordinates
    // vector v corresponds to the linear form with coefficients B⁻¹·v.
    let y = BuildingPoint::new(
        Matrix::from_int_rows(&[vec![1, 1], vec![0, 1]], cfg)?,
        vec![Val::zero(), Val::from_integer(2)],
    )?;
    let b_inv = y.basis().inverse()?;
    for vec in [vec![rat(1, 1), rat(0, 1)], vec![rat(3, 1), rat(2, 1)]] {
        let form = poly_change_basis(&Polynomial::linear_form(&vec), &b_inv)?;
        println!(
            "degree-1 form at {:?}: j = {}, point evaluation = {}",
            vec.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            eval_poly(&y, &form),
            y.eval_rational(&vec)?
        );
    }
    Ok(())
}
