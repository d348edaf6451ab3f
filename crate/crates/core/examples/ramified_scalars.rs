//! Exact arithmetic in k_m = Q[θ]/(θ^m − p): θ is an m-th root of p, so
//! valuations land in (1/m)Z.

use bruhat_tits::scalars::{val_p, ExtScalar, FieldConfig, Rational};

fn main() -> bruhat_tits::Result<()> {
    // Plain p-adic valuations on Q.
    let base = FieldConfig::base(3)?;
    for (n, d) in [(9i64, 2i64), (6, 7), (1, 27)] {
        let r = Rational::new(n.into(), d.into());
        println!("v_3({}/{}) = {}", n, d, val_p(&r, &base));
    }

    // The quadratic ramified extension of the 2-adics.
    let cfg = FieldConfig::new(2, 2)?;
    let theta = ExtScalar::theta(cfg);
    println!("\nin {}:", cfg);
    println!("θ·θ = {}", theta.mul(&theta));
    println!("v(θ) = {}", theta.val());

    let a = ExtScalar::from_integer(2, cfg).add(&theta); // 2 + θ
    println!("v(2 + θ) = {}", a.val());

    let inv = a.inv()?;
    println!("(2 + θ)⁻¹ = {}", inv);
    println!("(2 + θ)·(2 + θ)⁻¹ = {}", a.mul(&inv));

    // Valuations are exactly multiplicative.
    let b = theta.mul(&a).mul(&a);
    println!("v(θ·(2+θ)²) = {} (= 1/2 + 1/2 + 1/2)", b.val());
    Ok(())
}
