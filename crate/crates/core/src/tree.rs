//! Fully enumerable low-rank specializations: the `(p+1)`-regular lattice
//! tree in dimension 2, local incidence counts for dimension 3, and the
//! fixed-point-gap criterion for totally ramified Galois extensions.
//!
//! Tree vertices are homothety classes of rank-2 lattices over `Z_(p)`,
//! keyed by a canonical matrix: the Hermite normal form of a basis, scaled
//! by the unique p-power making the smallest entry valuation zero. Key
//! equality is lattice-class equality.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::building::{common_basis, BuildingPoint};
use crate::error::{Error, Result};
use crate::linalg::{hnf_dvr, Matrix};
use crate::scalars::{rational_pow, ExtScalar, FieldConfig, Rational, Val};

/// Default ceiling on enumerated vertices, CLI-overridable.
pub const DEFAULT_ENUM_CAP: usize = 100_000;

/// A vertex of the lattice tree: canonical Hermite-form key for a
/// homothety class of rank-2 lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    key: Matrix,
    cfg: FieldConfig,
}

impl TreeVertex {
    /// The class of the standard lattice `Z_(p)²`.
    pub fn standard(cfg: FieldConfig) -> Result<Self> {
        canonical_vertex(&Matrix::identity(2, cfg))
    }

    pub fn key(&self) -> &Matrix {
        &self.key
    }

    pub fn config(&self) -> FieldConfig {
        self.cfg
    }

    /// Compact canonical rendering, also the DOT node label:
    /// `[[a,b],[c,d]]` with exact rational entries.
    pub fn key_string(&self) -> String {
        let entry = |i: usize, j: usize| {
            self.key
                .get(i, j)
                .as_rational()
                .expect("tree keys live over the base field")
                .to_string()
        };
        format!(
            "[[{},{}],[{},{}]]",
            entry(0, 0),
            entry(0, 1),
            entry(1, 0),
            entry(1, 1)
        )
    }

    /// The lattice norm of this class as a building point (zero weights
    /// on the key basis).
    pub fn to_point(&self) -> BuildingPoint {
        BuildingPoint::new(self.key.clone(), vec![Val::zero(), Val::zero()])
            .expect("canonical keys are invertible")
    }
}

impl PartialOrd for TreeVertex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TreeVertex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key_string().cmp(&other.key_string())
    }
}

/// Canonical key of the lattice class spanned by the columns of `M`:
/// Hermite normal form, then the p-power rescale making the minimum entry
/// valuation zero (the primitive representative of the homothety class).
pub fn canonical_vertex(m: &Matrix) -> Result<TreeVertex> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch("tree vertices are 2x2 lattice bases".into()));
    }
    if m.config().ramification() != 1 {
        return Err(Error::ConfigMismatch("the lattice tree lives over the base field".into()));
    }
    let cfg = m.config();
    let h = hnf_dvr(m)?;
    let t = match h.min_entry_val() {
        Val::Finite(t) => i64::try_from(&t.to_integer()).expect("valuation fits in i64"),
        Val::Infinite => return Err(Error::SingularMatrix),
    };
    let key = h.scale(&ExtScalar::from_rational(rational_pow(cfg.prime(), -t), cfg));
    Ok(TreeVertex { key, cfg })
}

/// The `p+1` neighbors of a vertex: for each line `ℓ` of `L/pL`, the class
/// of the lattice spanned by a lift of `ℓ` together with `pL`. Sorted by
/// key.
pub fn neighbors(v: &TreeVertex) -> Vec<TreeVertex> {
    let cfg = v.cfg;
    let p = cfg.prime();
    let mut out = Vec::with_capacity(p as usize + 1);
    // Lines of F_p² in the key basis: directions (1, s) for s in [0, p),
    // and (0, 1). The sublattice is spanned by the lifted direction and p
    // times the complementary basis column.
    for s in 0..p {
        let gen = Matrix::from_rational_rows(
            &[
                vec![Rational::one(), Rational::zero()],
                vec![
                    Rational::from_integer(BigInt::from(s)),
                    Rational::from_integer(BigInt::from(p)),
                ],
            ],
            cfg,
        )
        .expect("well-formed generator matrix");
        out.push(canonical_vertex(&v.key.mul(&gen)).expect("neighbor lattices are invertible"));
    }
    let last = Matrix::from_rational_rows(
        &[
            vec![Rational::from_integer(BigInt::from(p)), Rational::zero()],
            vec![Rational::zero(), Rational::one()],
        ],
        cfg,
    )
    .expect("well-formed generator matrix");
    out.push(canonical_vertex(&v.key.mul(&last)).expect("neighbor lattices are invertible"));
    out.sort();
    out
}

/// A breadth-first enumerated ball of the tree: canonically sorted
/// vertices, edges as index pairs into the vertex list, and the size of
/// each sphere.
#[derive(Clone, Debug)]
pub struct TreeBall {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<(usize, usize)>,
    pub sphere_sizes: Vec<usize>,
}

/// All vertices at tree distance at most `radius`, by breadth-first
/// search. Fails with [`Error::CapExceeded`] when more than `cap`
/// vertices would be enumerated.
pub fn ball(v: &TreeVertex, radius: u32, cap: usize) -> Result<TreeBall> {
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut verts: Vec<TreeVertex> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut sphere_sizes = Vec::with_capacity(radius as usize + 1);

    index.insert(v.key_string(), 0);
    verts.push(v.clone());
    sphere_sizes.push(1);
    let mut frontier = vec![0usize];

    for _ in 0..radius {
        let mut next = Vec::new();
        for &ui in &frontier {
            let u = verts[ui].clone();
            for n in neighbors(&u) {
                let ks = n.key_string();
                if let Some(&known) = index.get(&ks) {
                    // Only the parent may already be known: the graph is
                    // a tree within any enumerated ball.
                    debug_assert!(
                        edges.iter().any(|&(a, b)| (a, b) == (known, ui) || (a, b) == (ui, known))
                            || known == ui,
                        "cycle detected in tree enumeration"
                    );
                    continue;
                }
                if verts.len() >= cap {
                    return Err(Error::CapExceeded(format!(
                        "ball enumeration exceeded the cap of {} vertices",
                        cap
                    )));
                }
                let idx = verts.len();
                index.insert(ks, idx);
                verts.push(n);
                edges.push((ui, idx));
                next.push(idx);
            }
        }
        sphere_sizes.push(next.len());
        frontier = next;
    }

    // Canonical order: sort vertices by key and remap the edges.
    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by_key(|&i| verts[i].key_string());
    let mut rank = vec![0usize; verts.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let vertices: Vec<TreeVertex> = order.iter().map(|&i| verts[i].clone()).collect();
    let mut edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (rank[a], rank[b]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort();
    Ok(TreeBall { vertices, edges, sphere_sizes })
}

/// Tree distance between two vertex classes: the gap of their relative
/// position (difference of the two invariant-factor exponents).
pub fn tree_distance(u: &TreeVertex, v: &TreeVertex) -> Result<u64> {
    let cb = common_basis(&u.to_point(), &v.to_point())?;
    let d0 = &cb.y_weights[0] - &cb.x_weights[0];
    let d1 = &cb.y_weights[1] - &cb.x_weights[1];
    let gap = if d0 <= d1 { d1 - d0 } else { d0 - d1 };
    debug_assert!(gap.is_integer());
    Ok(u64::try_from(&gap.to_integer()).expect("distance is non-negative"))
}

/// The unique geodesic vertex sequence from `u` to `v`, endpoints
/// included. Consecutive entries are neighbors; the length is the
/// invariant-factor gap of the two lattice classes.
pub fn path(u: &TreeVertex, v: &TreeVertex) -> Result<Vec<TreeVertex>> {
    let cb = common_basis(&u.to_point(), &v.to_point())?;
    let cfg = cb.basis.config();
    let d0 = &cb.y_weights[0] - &cb.x_weights[0];
    let d1 = &cb.y_weights[1] - &cb.x_weights[1];
    // Walk from u's weights toward v's along the moving coordinate.
    let (lo, hi) = if d0 <= d1 { (0usize, 1usize) } else { (1, 0) };
    let gap = {
        let g = if lo == 0 { &d1 - &d0 } else { &d0 - &d1 };
        debug_assert!(g.is_integer());
        i64::try_from(&g.to_integer()).expect("gap fits in i64")
    };
    let mut out = Vec::with_capacity(gap as usize + 1);
    for k in 0..=gap {
        let mut scaled = cb.basis.clone();
        // Point with weights 0 on `lo` and k on `hi` in the common basis:
        // its unit-ball lattice scales column `hi` by p^(−k).
        scaled.scale_col(
            hi,
            &ExtScalar::from_rational(rational_pow(cfg.prime(), -k), cfg),
        );
        out.push(canonical_vertex(&scaled)?);
    }
    debug_assert_eq!(out.first(), Some(u));
    debug_assert_eq!(out.last(), Some(v));
    Ok(out)
}

/// Local incidence counts in dimension 3: the intermediate lattice classes
/// `pL ⊂ M ⊂ L` of the standard `L` correspond to the proper nonzero
/// subspaces of `(Z/p)³`; returns the number of such classes (link size)
/// and the number of 2-simplices containing each edge through the class
/// of `L`, verified constant across edges.
///
/// The counts are `2(p² + p + 1)` and `p + 1`.
pub fn link_counts_sl3(cfg: &FieldConfig) -> Result<(usize, usize)> {
    if cfg.ramification() != 1 {
        return Err(Error::ConfigMismatch("link enumeration runs over the base field".into()));
    }
    if cfg.prime() > 7 {
        return Err(Error::CapExceeded(format!(
            "link enumeration is capped at p <= 7, got p = {}",
            cfg.prime()
        )));
    }
    let p = cfg.prime();

    // Lines of F_p³ as normalized representatives (first nonzero = 1).
    let mut lines: Vec<[u64; 3]> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            lines.push([1, a, b]);
        }
    }
    for a in 0..p {
        lines.push([0, 1, a]);
    }
    lines.push([0, 0, 1]);
    // Planes as kernels of normalized covectors; same parametrization by
    // duality.
    let planes = lines.clone();

    let incident = |line: &[u64; 3], normal: &[u64; 3]| {
        (line[0] * normal[0] + line[1] * normal[1] + line[2] * normal[2]) % p == 0
    };

    // Each vertex of the link is one edge through the central class; the
    // 2-simplices containing that edge are the link edges at the vertex,
    // i.e. its degree in the incidence graph.
    let mut degrees: Vec<usize> = Vec::new();
    for line in &lines {
        degrees.push(planes.iter().filter(|n| incident(line, n)).count());
    }
    for normal in &planes {
        degrees.push(lines.iter().filter(|l| incident(l, normal)).count());
    }

    let link_size = lines.len() + planes.len();
    let first = degrees[0];
    if degrees.iter().any(|&d| d != first) {
        return Err(Error::InvalidInput(
            "incidence graph is not regular; enumeration is inconsistent".into(),
        ));
    }
    Ok((link_size, first))
}

/// Outcome of the fixed-point-gap criterion for a totally ramified Galois
/// extension of degree `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisGap {
    /// Whether Galois-fixed points exist strictly outside the rational
    /// subtree: happens exactly when `e` vanishes in the residue field,
    /// i.e. `p | e`.
    pub gap_exists: bool,
    /// `v(α) = v(a_0)/e = 1/e` for a root `α` of a normalized Eisenstein
    /// polynomial of degree `e`: the distance from `α` to the base field
    /// in valuation units.
    pub alpha_val: Rational,
}

/// The degree-`e` fixed-point-gap criterion at the configured prime.
pub fn galois_gap(cfg: &FieldConfig, e: u64) -> Result<GaloisGap> {
    if e == 0 {
        return Err(Error::InvalidInput("extension degree must be >= 1".into()));
    }
    Ok(GaloisGap {
        gap_exists: e % cfg.prime() == 0,
        alpha_val: Rational::new(BigInt::one(), BigInt::from(e)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg(p: u64) -> FieldConfig {
        FieldConfig::base(p).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn key_of(rows: &[Vec<i64>], p: u64) -> TreeVertex {
        canonical_vertex(&Matrix::from_int_rows(rows, cfg(p)).unwrap()).unwrap()
    }

    #[test]
    fn canonical_vertex_examples() {
        let std = key_of(&[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(std.key_string(), "[[1,0],[0,1]]");

        let scaled = key_of(&[vec![2, 0], vec![0, 2]], 2);
        assert_eq!(scaled, std);

        let reduced = key_of(&[vec![2, 3], vec![0, 1]], 2);
        assert_eq!(reduced.key_string(), "[[2,1],[0,1]]");
    }

    #[test]
    fn canonical_vertex_is_class_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = cfg(3);
        for _ in 0..500 {
            let m = loop {
                let m = Matrix::from_rational_rows(
                    &[
                        vec![rat(rng.gen_range(-20..=20), rng.gen_range(1..=6)),
                             rat(rng.gen_range(-20..=20), rng.gen_range(1..=6))],
                        vec![rat(rng.gen_range(-20..=20), rng.gen_range(1..=6)),
                             rat(rng.gen_range(-20..=20), rng.gen_range(1..=6))],
                    ],
                    c,
                )
                .unwrap();
                if !m.det().is_zero() {
                    break m;
                }
            };
            let base = canonical_vertex(&m).unwrap();
            // Rescale by p-powers and right-multiply by a unimodular
            // shear/permutation: the class key must not change.
            let t = rng.gen_range(-3i64..=3);
            let mut u = Matrix::identity(2, c);
            u.set(0, 1, ExtScalar::from_integer(rng.gen_range(-9..=9), c));
            let mut moved = m.mul(&u).scale(&ExtScalar::from_rational(
                rational_pow(3, t),
                c,
            ));
            if rng.gen_bool(0.5) {
                let swap = Matrix::from_int_rows(&[vec![0, 1], vec![1, 0]], c).unwrap();
                moved = moved.mul(&swap);
            }
            assert_eq!(canonical_vertex(&moved).unwrap(), base);
        }
    }

    #[test]
    fn neighbors_examples() {
        let std2 = TreeVertex::standard(cfg(2)).unwrap();
        let n2 = neighbors(&std2);
        let keys: Vec<String> = n2.iter().map(|v| v.key_string()).collect();
        assert_eq!(keys, vec!["[[1,0],[0,2]]", "[[2,0],[0,1]]", "[[2,1],[0,1]]"]);

        let std3 = TreeVertex::standard(cfg(3)).unwrap();
        assert_eq!(neighbors(&std3).len(), 4);

        // Valency p+1, symmetry, and squared distance 1/2 at arbitrary
        // vertices.
        let v = key_of(&[vec![4, 3], vec![0, 1]], 3);
        let nv = neighbors(&v);
        assert_eq!(nv.len(), 4);
        for n in &nv {
            assert!(neighbors(n).contains(&v));
            assert_eq!(tree_distance(&v, n).unwrap(), 1);
            assert_eq!(
                crate::building::distance2(&v.to_point(), &n.to_point()).unwrap(),
                rat(1, 2)
            );
        }
    }

    #[test]
    fn ball_examples() {
        let std2 = TreeVertex::standard(cfg(2)).unwrap();
        assert_eq!(ball(&std2, 0, 100).unwrap().vertices.len(), 1);

        let b = ball(&std2, 2, 1000).unwrap();
        assert_eq!(b.vertices.len(), 10);
        assert_eq!(b.sphere_sizes, vec![1, 3, 6]);
        assert_eq!(b.edges.len(), 9);

        let std3 = TreeVertex::standard(cfg(3)).unwrap();
        let b = ball(&std3, 2, 1000).unwrap();
        assert_eq!(b.vertices.len(), 17);
        assert_eq!(b.sphere_sizes, vec![1, 4, 12]);

        assert!(matches!(
            ball(&std2, 5, 10),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn path_examples() {
        let std2 = TreeVertex::standard(cfg(2)).unwrap();
        assert_eq!(path(&std2, &std2).unwrap(), vec![std2.clone()]);

        let far = key_of(&[vec![4, 0], vec![0, 1]], 2);
        let p = path(&std2, &far).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1], key_of(&[vec![2, 0], vec![0, 1]], 2));
        assert_eq!(p.first(), Some(&std2));
        assert_eq!(p.last(), Some(&far));

        let back = path(&far, &std2).unwrap();
        let reversed: Vec<TreeVertex> = p.iter().rev().cloned().collect();
        assert_eq!(back, reversed);
    }

    #[test]
    fn path_steps_are_neighbors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = cfg(2);
        let b = ball(&TreeVertex::standard(c).unwrap(), 6, 10_000).unwrap();
        for _ in 0..200 {
            let u = &b.vertices[rng.gen_range(0..b.vertices.len())];
            let v = &b.vertices[rng.gen_range(0..b.vertices.len())];
            let pth = path(u, v).unwrap();
            assert_eq!(pth.len() as u64, tree_distance(u, v).unwrap() + 1);
            for w in pth.windows(2) {
                assert!(neighbors(&w[0]).contains(&w[1]));
            }
        }
    }

    #[test]
    fn neighbors_lie_in_the_unit_ball() {
        for p in [2u64, 3] {
            let v = TreeVertex::standard(cfg(p)).unwrap();
            let b = ball(&v, 1, 100).unwrap();
            for n in neighbors(&v) {
                assert!(b.vertices.contains(&n));
            }
            assert_eq!(b.vertices.len(), p as usize + 2);
        }
    }

    #[test]
    fn link_counts_examples() {
        assert_eq!(link_counts_sl3(&cfg(2)).unwrap(), (14, 3));
        assert_eq!(link_counts_sl3(&cfg(3)).unwrap(), (26, 4));
        assert!(matches!(
            link_counts_sl3(&cfg(11)),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn galois_gap_examples() {
        let g = galois_gap(&cfg(2), 2).unwrap();
        assert!(g.gap_exists);
        assert_eq!(g.alpha_val, rat(1, 2));

        let g = galois_gap(&cfg(2), 3).unwrap();
        assert!(!g.gap_exists);
        assert_eq!(g.alpha_val, rat(1, 3));

        let g = galois_gap(&cfg(3), 6).unwrap();
        assert!(g.gap_exists);
        assert_eq!(g.alpha_val, rat(1, 6));

        assert!(galois_gap(&cfg(2), 0).is_err());
    }
}
