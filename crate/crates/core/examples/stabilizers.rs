//! Stabilizers of norms: the entry-valuation description against the
//! direct action test, in norm mode and class mode.

use bruhat_tits::building::{act, class_equal, stabilizes, BuildingPoint, StabMode};
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::{FieldConfig, Rational, Val};

fn main() -> bruhat_tits::Result<()> {
    let cfg = FieldConfig::base(2)?;
    let x = BuildingPoint::new(
        Matrix::identity(2, cfg),
        vec![Val::zero(), Val::from_integer(1)],
    )?;

    let half = Rational::new(1.into(), 2.into());
    let candidates = vec![
        ("identity", Matrix::identity(2, cfg)),
        ("unimodular shear", Matrix::from_int_rows(&[vec![1, 2], vec![0, 1]], cfg)?),
        ("p-scaled shear", Matrix::from_int_rows(&[vec![1, 0], vec![2, 1]], cfg)?),
        (
            "negative-valuation corner",
            Matrix::from_rational_rows(
                &[vec![Rational::from_integer(1.into()), half],
                  vec![Rational::from_integer(0.into()), Rational::from_integer(1.into())]],
                cfg,
            )?,
        ),
        ("central 2·id", Matrix::from_int_rows(&[vec![2, 0], vec![0, 2]], cfg)?),
    ];

    println!("point weights (0, 1), p = 2");
    println!("{:<26} {:>6} {:>7}", "matrix", "norm", "class");
    for (name, g) in candidates {
        let fixes_norm = stabilizes(&g, &x, StabMode::Norm)?;
        let fixes_class = stabilizes(&g, &x, StabMode::Class)?;
        println!("{:<26} {:>6} {:>7}", name, fixes_norm, fixes_class);
        // Class mode must agree with the direct comparison.
        assert_eq!(fixes_class, class_equal(&act(&g, &x)?, &x)?);
    }
    println!("\nnote: the central element moves the norm but fixes the class");
    Ok(())
}
