//! Elementary unipotent matrices fold the building along half-apartments:
//! u_ij(λ) fixes exactly the norms with v(λ) ≥ w_j − w_i.

use bruhat_tits::building::{act_unnormalized, fold_fixed, norm_equal, unipotent, BuildingPoint};
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::{ExtScalar, FieldConfig, Val};

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(2)?;
    let id = Matrix::identity(2, cfg);

    println!("u_01(λ) against weights (0, w_1), p = 2:");
    println!("{:>8} {:>6} {:>10} {:>10}", "v(λ)", "w_1", "predicate", "action");
    for k in 0..=3i64 {
        let lam = ExtScalar::theta_pow(k, cfg);
        for w1 in 0..=3i64 {
            let x = BuildingPoint::new(
                id.clone(),
                vec![Val::zero(), Val::from_integer(w1)],
            )?;
            let predicate = fold_fixed(0, 1, &lam, &x)?;
            let u = unipotent(2, 0, 1, &lam);
            let fixes = norm_equal(&act_unnormalized(&u, &x)?, &x)?;
            println!("{:>8} {:>6} {:>10} {:>10}", k, w1, predicate, fixes);
            assert_eq!(predicate, fixes);
        }
    }
    println!("\nthe two columns agree on the whole grid");
    Ok(())
}
