//! Smith normal form over the valuation ring and the Cartan decomposition
//! g = U·diag(p^a_i)·W with unimodular factors.

use bruhat_tits::building::cartan;
use bruhat_tits::linalg::{snf_dvr, Matrix};
use bruhat_tits::scalars::FieldConfig;

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(2)?;

    // A matrix where p-adic cancellation matters: every entry is a unit,
    // yet the determinant has valuation 1.
    let g = Matrix::from_int_rows(&[vec![1, 1], vec![1, 3]], cfg)?;
    let dec = cartan(&g)?;
    println!("g = {:?}", g);
    let fmt = |deltas: &[bruhat_tits::Rational]| {
        deltas.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
    };
    println!("exponents: [{}]", fmt(dec.exponents.deltas()));
    println!("U = {:?}", dec.u);
    println!("W = {:?}", dec.w);
    println!("U unimodular: {}", dec.u.is_unimodular());
    println!("W unimodular: {}", dec.w.is_unimodular());
    println!("U·D·W == g: {}", dec.reconstruct() == g);

    // The same machinery over a ramified extension: exponents in (1/2)Z.
    let ext = FieldConfig::new(3, 2)?;
    let theta = bruhat_tits::ExtScalar::theta(ext);
    let mut m = Matrix::identity(2, ext);
    m.set(0, 0, theta.clone());
    m.set(0, 1, bruhat_tits::ExtScalar::from_integer(3, ext));
    m.set(1, 0, bruhat_tits::ExtScalar::from_integer(1, ext));
    let snf = snf_dvr(&m)?;
    println!("\nover k_2 = Q[θ]/(θ² − 3):");
    println!("  input {:?}", m);
    println!("  exponents [{}]", fmt(&snf.exponents));
    println!("  reconstruction exact: {}", snf.reconstruct() == m);
    Ok(())
}
