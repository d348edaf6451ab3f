//! Local structure in rank 3: the intermediate lattices pL ⊂ M ⊂ L form
//! the incidence graph of lines and planes of (Z/p)³, giving 2(p²+p+1)
//! link vertices and p+1 triangles through every edge.

use bruhat_tits::scalars::FieldConfig;
use bruhat_tits::tree::link_counts_sl3;

fn main() -> bruhat_tits::Result<()> {
    println!("{:>4} {:>12} {:>20}", "p", "link size", "triangles per edge");
    for p in [2u64, 3, 5, 7] {
        let cfg = FieldConfig::base(p)?;
        let (size, triangles) = link_counts_sl3(&cfg)?;
        println!("{:>4} {:>12} {:>20}", p, size, triangles);
        assert_eq!(size as u64, 2 * (p * p + p + 1));
        assert_eq!(triangles as u64, p + 1);
    }
    Ok(())
}
