//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//! All tolerances are pinned here; everything is exact except the
//! triangle inequality, which compares square roots at 1e-9.

mod common;

use common::*;

use bruhat_tits::building::{
    act, act_unnormalized, cartan, class_equal, common_basis, distance2, fold_fixed, norm_equal,
    relpos, stabilizes, unipotent, BuildingPoint, StabMode,
};
use bruhat_tits::cli::export_dot;
use bruhat_tits::compactification::{
    boundary_stab_check, eval_poly, poly_change_basis, ray_limit, seminorm_equal, stratum_of,
    Polynomial,
};
use bruhat_tits::linalg::{snf_dvr, Matrix};
use bruhat_tits::scalars::{ExtScalar, Rational, Val};
use bruhat_tits::tree::{ball, galois_gap, link_counts_sl3, TreeVertex};

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn criterion_01_cartan_snf_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let primes = [2u64, 3, 5];
    let rams = [1u32, 2, 3];
    for iter in 0..1000 {
        let p = primes[iter % primes.len()];
        let m = rams[(iter / primes.len()) % rams.len()];
        let c = cfg(p, m);
        let n = rng.gen_range(1..=5);
        let g = random_invertible(&mut rng, n, c, 1000, 1000);
        let snf = snf_dvr(&g).unwrap();
        assert_eq!(snf.reconstruct(), g, "U·D·W must reproduce the input exactly");
        assert!(snf.u.is_unimodular(), "U must be unimodular");
        assert!(snf.w.is_unimodular(), "W must be unimodular");
        assert!(
            snf.exponents.windows(2).all(|w| w[0] <= w[1]),
            "exponents must be sorted"
        );
        let sum: Rational = snf.exponents.iter().sum();
        assert_eq!(Val::Finite(sum), g.det().val(), "exponent sum must be v(det)");
    }
    println!("criterion 01 (Cartan/SNF exactness, 1000 samples): PASS");
}

#[test]
fn criterion_02_stabilizer_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut trues = 0usize;
    let mut falses = 0usize;
    let mut iter = 0usize;
    while iter < 500 {
        let p = [2u64, 3, 5][iter % 3];
        let c = cfg(p, 1);
        let dim = rng.gen_range(2..=4);
        let basis = random_int_basis(&mut rng, dim, c);
        let w: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
        let weights = w.iter().map(|&n| Val::from_integer(n)).collect();
        let x = BuildingPoint::new(basis.clone(), weights).unwrap();

        // Half the samples are engineered to satisfy the entry bounds
        // (v(h_ij) >= w_j − w_i), the other half are unconstrained.
        let g = if iter % 2 == 0 {
            let mut h = Matrix::identity(dim, c);
            for i in 0..dim {
                for j in 0..dim {
                    // Unit diagonal keeps v(det) = 0 likely; off-diagonal
                    // entries respect the weight gaps by construction.
                    let (coef, e) = if i == j {
                        (rng.gen_range(1..=(p as i64 - 1).max(1)), 0)
                    } else {
                        (rng.gen_range(-2..=2), (w[j] - w[i]).max(0) + rng.gen_range(0..=1))
                    };
                    let entry = rat(coef, 1)
                        * bruhat_tits::scalars::rational_pow(p, e);
                    h.set(i, j, ExtScalar::from_rational(entry, c));
                }
            }
            if h.det().is_zero() {
                continue;
            }
            basis.mul(&h).mul(&basis.inverse().unwrap())
        } else {
            random_invertible(&mut rng, dim, c, 20, 8)
        };

        let predicate = stabilizes(&g, &x, StabMode::Norm).unwrap();

        // Exact action fixpoint, sampled on basis vectors, their sums and
        // differences, unit-ball lattice combinations, and 50 random
        // vectors.
        let gx = act_unnormalized(&g, &x).unwrap();
        let mut vectors: Vec<Vec<Rational>> = Vec::new();
        for i in 0..dim {
            vectors.push((0..dim).map(|r| {
                x.basis().get(r, i).as_rational().unwrap().clone()
            }).collect());
        }
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                for sign in [1i64, -1] {
                    let v: Vec<Rational> = (0..dim)
                        .map(|r| {
                            x.basis().get(r, i).as_rational().unwrap()
                                + x.basis().get(r, j).as_rational().unwrap() * rat(sign, 1)
                        })
                        .collect();
                    vectors.push(v);
                }
            }
        }
        for _ in 0..20 {
            // Unit-ball lattice points: B·diag(p^{-w})·c with small integer c.
            let coeffs: Vec<Rational> = (0..dim)
                .map(|i| {
                    rat(rng.gen_range(0..(p as i64)), 1)
                        * bruhat_tits::scalars::rational_pow(p, -w[i])
                })
                .collect();
            let v: Vec<Rational> = (0..dim)
                .map(|r| {
                    (0..dim)
                        .map(|i| x.basis().get(r, i).as_rational().unwrap() * &coeffs[i])
                        .sum()
                })
                .collect();
            if v.iter().all(|t| t.is_zero()) {
                continue;
            }
            vectors.push(v);
        }
        for _ in 0..50 {
            let v = rational_vec(&mut rng, dim, 40, 4);
            if v.iter().all(|t| t.is_zero()) {
                continue;
            }
            vectors.push(v);
        }
        let sampled_fixpoint = vectors.iter().all(|v| {
            gx.eval_rational(v).unwrap() == x.eval_rational(v).unwrap()
        });
        let exact_fixpoint = norm_equal(&gx, &x).unwrap();

        assert_eq!(predicate, exact_fixpoint, "predicate vs exact norm equality");
        assert_eq!(predicate, sampled_fixpoint, "predicate vs sampled fixpoint");
        if predicate {
            trues += 1;
        } else {
            falses += 1;
        }
        iter += 1;
    }
    assert!(trues > 20 && falses > 20, "both outcomes must be exercised");
    println!(
        "criterion 02 (stabilizer equivalence, 500 samples, {} fixing / {} moving): PASS",
        trues, falses
    );
}

#[test]
fn criterion_03_folding_law_exhaustive() {
    for p in [2u64, 3] {
        let c = cfg(p, 2);
        let id = Matrix::identity(2, c);
        // v(λ) and the weight gap both range over [−3, 3] ∩ (1/2)Z.
        for k in -6i64..=6 {
            let lam = ExtScalar::theta_pow(k, c);
            for gap2 in -6i64..=6 {
                let x = BuildingPoint::new(
                    id.clone(),
                    vec![Val::zero(), Val::Finite(rat(gap2, 2))],
                )
                .unwrap();
                let predicate = fold_fixed(0, 1, &lam, &x).unwrap();
                let u = unipotent(2, 0, 1, &lam);
                let fixes = norm_equal(&act_unnormalized(&u, &x).unwrap(), &x).unwrap();
                assert_eq!(
                    predicate, fixes,
                    "p={} v(λ)={}/2 gap={}/2",
                    p, k, gap2
                );
            }
        }
        // λ = 0 fixes everything.
        let zero = ExtScalar::zero(c);
        let x = BuildingPoint::new(id, vec![Val::zero(), Val::Finite(rat(5, 2))]).unwrap();
        assert!(fold_fixed(0, 1, &zero, &x).unwrap());
    }
    println!("criterion 03 (folding law, exhaustive grid p=2,3): PASS");
}

#[test]
fn criterion_04_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let c = cfg(3, 1);

    // Exact symmetry.
    for _ in 0..300 {
        let dim = rng.gen_range(2..=4);
        let x = random_norm(&mut rng, dim, c, 5, 2);
        let y = random_norm(&mut rng, dim, c, 5, 2);
        assert_eq!(distance2(&x, &y).unwrap(), distance2(&y, &x).unwrap());
    }

    // Triangle inequality on square roots, float comparison at 1e-9.
    for _ in 0..300 {
        let dim = rng.gen_range(2..=3);
        let x = random_norm(&mut rng, dim, c, 5, 2);
        let y = random_norm(&mut rng, dim, c, 5, 2);
        let z = random_norm(&mut rng, dim, c, 5, 2);
        let dxy = distance2(&x, &y).unwrap().to_f64().unwrap().sqrt();
        let dyz = distance2(&y, &z).unwrap().to_f64().unwrap().sqrt();
        let dxz = distance2(&x, &z).unwrap().to_f64().unwrap().sqrt();
        assert!(dxz <= dxy + dyz + 1e-9, "triangle inequality violated");
    }

    // Exact isometry of the action on centered relative positions.
    for _ in 0..300 {
        let dim = rng.gen_range(2..=3);
        let x = random_norm(&mut rng, dim, c, 4, 2);
        let y = random_norm(&mut rng, dim, c, 4, 2);
        let g = random_invertible(&mut rng, dim, c, 10, 6);
        let before = relpos(&x, &y).unwrap().centered();
        let after = relpos(&act(&g, &x).unwrap(), &act(&g, &y).unwrap())
            .unwrap()
            .centered();
        assert_eq!(before, after);
    }
    println!("criterion 04 (metric: symmetry, triangle at 1e-9, isometry): PASS");
}

#[test]
fn criterion_05_tree_sphere_sizes() {
    for p in [2u64, 3, 5] {
        let c = cfg(p, 1);
        let b = ball(&TreeVertex::standard(c).unwrap(), 5, 100_000).unwrap();
        assert_eq!(b.sphere_sizes[0], 1);
        for n in 1..=5usize {
            let expected = ((p + 1) * p.pow(n as u32 - 1)) as usize;
            assert_eq!(b.sphere_sizes[n], expected, "sphere size at p={} n={}", p, n);
        }
        assert_eq!(b.edges.len(), b.vertices.len() - 1, "ball must be a tree");
        let dot = export_dot(&b);
        let edge_lines = dot.lines().filter(|l| l.contains(" -- ")).count();
        let node_lines = dot
            .lines()
            .filter(|l| l.ends_with(';') && !l.contains(" -- "))
            .count();
        assert_eq!(node_lines, b.vertices.len());
        assert_eq!(edge_lines, node_lines - 1, "DOT edge count = node count − 1");
    }
    println!("criterion 05 (tree sphere sizes (p+1)p^(n-1), p=2,3,5, n<=5): PASS");
}

#[test]
fn criterion_06_sl3_link_counts() {
    for p in [2u64, 3] {
        let (link_size, triangles) = link_counts_sl3(&cfg(p, 1)).unwrap();
        assert_eq!(link_size as u64, 2 * (p * p + p + 1), "link size at p={}", p);
        assert_eq!(triangles as u64, p + 1, "triangles per edge at p={}", p);
    }
    println!("criterion 06 (rank-3 links: size 2(p²+p+1), p+1 triangles per edge): PASS");
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize) -> Polynomial {
    let mut f = Polynomial::zero(nvars);
    let terms = rng.gen_range(1..=5);
    for _ in 0..terms {
        let exp: Vec<u32> = {
            // Total degree at most 4.
            let mut left = 4u32;
            (0..nvars)
                .map(|_| {
                    let e = rng.gen_range(0..=left.min(2));
                    left -= e;
                    e
                })
                .collect()
        };
        let coef = random_rational(rng, 60, 12);
        if !coef.is_zero() {
            f.add_term(exp, coef);
        }
    }
    if f.is_zero() {
        f.add_term(vec![0; nvars], rat(1, 1));
    }
    f
}

fn random_point_maybe_boundary(rng: &mut ChaCha8Rng, dim: usize, p: u64) -> BuildingPoint {
    let c = cfg(p, 1);
    let weights: Vec<Val> = loop {
        let w: Vec<Val> = (0..dim)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    Val::Infinite
                } else {
                    Val::Finite(random_rational(rng, 4, 2))
                }
            })
            .collect();
        if w.iter().any(|v| v.is_finite()) {
            break w;
        }
    };
    BuildingPoint::new(Matrix::identity(dim, c), weights).unwrap()
}

#[test]
fn criterion_07_gauss_multiplicativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for iter in 0..200 {
        let p = [2u64, 3, 5][iter % 3];
        let dim = rng.gen_range(2..=4);
        let x = random_point_maybe_boundary(&mut rng, dim, p);
        let f = random_poly(&mut rng, dim);
        let g = random_poly(&mut rng, dim);
        let lhs = eval_poly(&x, &f.mul(&g));
        let rhs = eval_poly(&x, &f).plus(&eval_poly(&x, &g));
        assert_eq!(lhs, rhs, "Gauss evaluation must be multiplicative");
    }
    println!("criterion 07 (Gauss multiplicativity, 200 pairs incl. boundary): PASS");
}

#[test]
fn criterion_08_degree_one_restriction() {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for iter in 0..60 {
        let p = [2u64, 3][iter % 2];
        let c = cfg(p, 1);
        let dim = rng.gen_range(2..=4);
        let basis = random_int_basis(&mut rng, dim, c);
        let weights: Vec<Val> = (0..dim)
            .map(|i| {
                if i > 0 && rng.gen_bool(0.25) {
                    Val::Infinite
                } else {
                    Val::Finite(random_rational(&mut rng, 4, 2))
                }
            })
            .collect();
        let x = BuildingPoint::new(basis.clone(), weights).unwrap();

        // On basis vectors the adapted coordinates are plain variables.
        for i in 0..dim {
            let var = Polynomial::variable(i, dim);
            let col: Vec<Rational> = (0..dim)
                .map(|r| basis.get(r, i).as_rational().unwrap().clone())
                .collect();
            assert_eq!(eval_poly(&x, &var), x.eval_rational(&col).unwrap());
        }
        // On arbitrary vectors, transport the standard linear form into
        // adapted coordinates (coefficients pick up B⁻¹) first.
        let basis_inv = basis.inverse().unwrap();
        for _ in 0..50 {
            let v = rational_vec(&mut rng, dim, 30, 6);
            if v.iter().all(|t| t.is_zero()) {
                continue;
            }
            let form = poly_change_basis(&Polynomial::linear_form(&v), &basis_inv).unwrap();
            assert_eq!(eval_poly(&x, &form), x.eval_rational(&v).unwrap());
        }
    }
    println!("criterion 08 (degree-1 restriction reproduces point evaluation): PASS");
}

#[test]
fn criterion_09_ray_limits() {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for iter in 0..100 {
        let p = [2u64, 3, 5][iter % 3];
        let c = cfg(p, 1);
        let dim = rng.gen_range(2..=4);
        let x = random_norm(&mut rng, dim, c, 4, 2);
        let dir: Vec<Rational> = loop {
            let d = rational_vec(&mut rng, dim, 3, 2);
            if d.iter().any(|t| *t != d[0]) {
                break d;
            }
        };
        let min = dir.iter().min().unwrap().clone();
        let argmin: Vec<usize> = (0..dim).filter(|&i| dir[i] == min).collect();
        let limit = ray_limit(&x, &dir).unwrap();

        // Kernel indices are exactly the complement of the argmin set.
        let complement: Vec<usize> = (0..dim).filter(|&i| dir[i] != min).collect();
        assert_eq!(limit.infinite_indices(), complement);
        assert_eq!(limit.finite_indices(), argmin);

        // Distinguished conditions for the sequence z_n = (basis, w + n·dir),
        // checked symbolically on the ray parametrization: the coordinate
        // ratio z_n(e_j)/z_n(e_i) is p^{−(w_j − w_i) − n·(dir_j − dir_i)}.
        // (a) coordinates on the argmin set never vanish: weights finite;
        let w = x.finite_weights().unwrap();
        for &i in &argmin {
            assert!(w.get(i).is_some());
        }
        // (b) within the argmin set the ratio exponent is constant in n
        //     (dir_i = dir_j), so the ratio converges to a positive number;
        for &i in &argmin {
            for &j in &argmin {
                assert_eq!(dir[i], dir[j]);
            }
        }
        // (c) against the complement the exponent grows linearly
        //     (dir_j > dir_i), so the ratio tends to zero.
        for &i in &argmin {
            for &j in &complement {
                assert!(dir[j] > dir[i]);
            }
        }

        // The limit class only depends on dir up to shifts and positive
        // rescaling.
        let shift = random_rational(&mut rng, 3, 2);
        let shifted: Vec<Rational> = dir.iter().map(|d| d + &shift).collect();
        let scaled: Vec<Rational> = dir.iter().map(|d| d * rat(3, 2)).collect();
        assert_eq!(ray_limit(&x, &shifted).unwrap(), limit);
        assert_eq!(ray_limit(&x, &scaled).unwrap(), limit);
    }
    println!("criterion 09 (ray limits: kernel = complement of argmin, distinguished): PASS");
}

#[test]
fn criterion_10_boundary_stabilizers() {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut trues = 0usize;
    let mut falses = 0usize;
    let mut done = 0usize;
    while done < 300 {
        let p = [2u64, 3][done % 2];
        let c = cfg(p, 1);
        let dim = rng.gen_range(2..=4);
        // Integer weights keep the weight ratios inside the value group.
        let x = random_boundary_point(&mut rng, dim, c);

        let g = if done % 2 == 0 {
            // Likely stabilizing: block upper-triangular with respect to
            // (complement | kernel) in x's basis.
            let s = stratum_of(&x);
            let q = dim - s.kernel_dim();
            let mut block = Matrix::identity(dim, c);
            for i in 0..dim {
                for j in 0..dim {
                    if i >= q && j < q {
                        continue; // keep the kernel-row block zero
                    }
                    let e = rng.gen_range(-1..=2);
                    if i == j {
                        block.set(i, j, ExtScalar::from_rational(
                            bruhat_tits::scalars::rational_pow(p, e),
                            c,
                        ));
                    } else if rng.gen_bool(0.5) {
                        block.set(
                            i,
                            j,
                            ExtScalar::from_integer(rng.gen_range(-3..=3), c),
                        );
                    }
                }
            }
            if block.det().is_zero() {
                continue;
            }
            let xn = x.normalize();
            let fin = xn.finite_indices();
            let inf = xn.infinite_indices();
            let mut cols: Vec<usize> = fin;
            cols.extend(inf);
            // Assemble (complement | kernel) as a plain column permutation
            // of the basis.
            let mut full = Matrix::identity(dim, c);
            for (new_j, &old_j) in cols.iter().enumerate() {
                for r in 0..dim {
                    full.set(r, new_j, xn.basis().get(r, old_j).clone());
                }
            }
            full.mul(&block).mul(&full.inverse().unwrap())
        } else {
            random_invertible(&mut rng, dim, c, 8, 4)
        };

        let predicate = boundary_stab_check(&g, &x).unwrap();
        let action = seminorm_equal(&act(&g, &x).unwrap(), &x).unwrap();
        assert_eq!(predicate, action, "block predicate vs action test");
        if predicate {
            trues += 1;
        } else {
            falses += 1;
        }
        done += 1;
    }
    assert!(trues > 20 && falses > 20, "both outcomes must be exercised");
    println!(
        "criterion 10 (boundary stabilizers, 300 samples, {} fixing / {} moving): PASS",
        trues, falses
    );
}

#[test]
fn criterion_11_galois_gap_truth_table() {
    for p in [2u64, 3, 5, 7] {
        let c = cfg(p, 1);
        for e in 1u64..=12 {
            let gap = galois_gap(&c, e).unwrap();
            assert_eq!(gap.gap_exists, e % p == 0, "gap criterion at p={} e={}", p, e);
            assert_eq!(gap.alpha_val, Rational::new(1.into(), e.into()));
        }
    }
    // Degree-2 extension of the 2-adic field: gap exists, v(α) = 1/2.
    let gap = galois_gap(&cfg(2, 1), 2).unwrap();
    assert!(gap.gap_exists);
    assert_eq!(gap.alpha_val, rat(1, 2));
    println!("criterion 11 (fixed-point gap iff p | e, p in 2..7, e in 1..12): PASS");
}

#[test]
fn criterion_12_extension_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    for iter in 0..1000 {
        let p = [2u64, 3, 5][iter % 3];
        let m = [1u32, 2, 3][(iter / 3) % 3];
        let c = cfg(p, m);
        let a = random_scalar(&mut rng, c, 1000, 1000);
        let b = random_scalar(&mut rng, c, 1000, 1000);
        let d = random_scalar(&mut rng, c, 1000, 1000);

        // Valuation laws.
        assert_eq!(a.mul(&b).val(), a.val().plus(&b.val()));
        assert!(a.add(&b).val() >= a.val().min(b.val()));

        // Field axioms.
        assert_eq!(a.add(&b), b.add(&a));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.add(&b).add(&d), a.add(&b.add(&d)));
        assert_eq!(a.mul(&b).mul(&d), a.mul(&b.mul(&d)));
        assert_eq!(a.mul(&b.add(&d)), a.mul(&b).add(&a.mul(&d)));
        assert_eq!(a.add(&a.neg()), ExtScalar::zero(c));
        assert_eq!(a.mul(&ExtScalar::one(c)), a);
        if !a.is_zero() {
            assert_eq!(a.mul(&a.inv().unwrap()), ExtScalar::one(c));
        }
    }
    println!("criterion 12 (extension field axioms and v(ab) = v(a)+v(b), 1000 samples): PASS");
}

#[test]
fn supplementary_cartan_exponents_match_vertex_translation() {
    // The exponent vector of the Cartan decomposition and the relative
    // position of (o, g·o) at the standard vertex agree after centering,
    // up to the documented duality (negate and reverse) coming from the
    // sign in the weight translation formula.
    let mut rng = ChaCha8Rng::seed_from_u64(515);
    for iter in 0..500 {
        let p = [2u64, 3, 5][iter % 3];
        let c = cfg(p, 1);
        let n = rng.gen_range(2..=4);
        let g = random_invertible(&mut rng, n, c, 50, 20);
        let dec = cartan(&g).unwrap();
        assert_eq!(dec.reconstruct(), g);
        let o = BuildingPoint::standard_vertex(n, c);
        let rp = relpos(&o, &act(&g, &o).unwrap()).unwrap();
        assert_eq!(rp.centered(), dec.exponents.centered().dual());
    }
    println!("supplementary (Cartan exponents vs vertex translation, 500 samples): PASS");
}

#[test]
fn supplementary_common_basis_reproduces_both_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(616);
    for iter in 0..150 {
        let p = [2u64, 3][iter % 2];
        let c = cfg(p, 1);
        let dim = rng.gen_range(2..=3);
        let x = random_norm(&mut rng, dim, c, 3, 2);
        let y = random_norm(&mut rng, dim, c, 3, 2);
        let cb = common_basis(&x, &y).unwrap();
        let xr = BuildingPoint::new(
            cb.basis.clone(),
            cb.x_weights.iter().cloned().map(Val::Finite).collect(),
        )
        .unwrap();
        let yr = BuildingPoint::new(
            cb.basis.clone(),
            cb.y_weights.iter().cloned().map(Val::Finite).collect(),
        )
        .unwrap();
        assert!(norm_equal(&xr, &x.lift(cb.basis.config()).unwrap()).unwrap());
        assert!(norm_equal(&yr, &y.lift(cb.basis.config()).unwrap()).unwrap());
        // Same class iff constant relative position.
        assert_eq!(
            class_equal(&x, &y).unwrap(),
            relpos(&x, &y).unwrap().is_constant()
        );
    }
    println!("supplementary (common basis reproduces both norms, 150 samples): PASS");
}
