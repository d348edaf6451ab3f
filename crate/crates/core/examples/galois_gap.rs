//! Totally ramified Galois extensions of degree e: fixed points of the
//! Galois action spill outside the rational subtree exactly when the
//! residue characteristic divides e. The distance data is v(α) = 1/e for
//! an Eisenstein root α.

use bruhat_tits::scalars::FieldConfig;
use bruhat_tits::tree::galois_gap;

fn main() -> bruhat_tits::Result<()> {
    for p in [2u64, 3, 5, 7] {
        let cfg = FieldConfig::base(p)?;
        print!("p = {}: ", p);
        for e in 1u64..=12 {
            let g = galois_gap(&cfg, e)?;
            print!("{}", if g.gap_exists { 'X' } else { '.' });
        }
        println!("   (degrees 1..12, X = gap exists)");
    }

    let g = galois_gap(&FieldConfig::base(2)?, 2)?;
    println!(
        "\nquadratic ramified extension of the 2-adics: gap = {}, v(α) = {}",
        g.gap_exists, g.alpha_val
    );
    Ok(())
}
