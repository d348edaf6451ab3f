//! Shared helpers for the integration test suites: deterministic random
//! scalars, matrices and points.

use bruhat_tits::building::BuildingPoint;
use bruhat_tits::linalg::Matrix;
use bruhat_tits::scalars::{ExtScalar, FieldConfig, Rational, Val};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn cfg(p: u64, m: u32) -> FieldConfig {
    FieldConfig::new(p, m).unwrap()
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn random_scalar(rng: &mut ChaCha8Rng, c: FieldConfig, max_num: i64, max_den: i64) -> ExtScalar {
    let coeffs = (0..c.ramification())
        .map(|_| random_rational(rng, max_num, max_den))
        .collect();
    ExtScalar::from_coeffs(coeffs, c).unwrap()
}

pub fn random_invertible(
    rng: &mut ChaCha8Rng,
    n: usize,
    c: FieldConfig,
    max_num: i64,
    max_den: i64,
) -> Matrix {
    loop {
        let data = (0..n * n)
            .map(|_| random_scalar(rng, c, max_num, max_den))
            .collect();
        let m = Matrix::new(n, n, data, c).unwrap();
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random invertible matrix with small integer entries (handy as a basis).
pub fn random_int_basis(rng: &mut ChaCha8Rng, n: usize, c: FieldConfig) -> Matrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let m = Matrix::from_int_rows(&rows, c).unwrap();
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random norm (all weights finite) with rational weights of bounded size
/// and denominator.
pub fn random_norm(
    rng: &mut ChaCha8Rng,
    dim: usize,
    c: FieldConfig,
    max_w: i64,
    max_den: i64,
) -> BuildingPoint {
    let basis = random_int_basis(rng, dim, c);
    let weights = (0..dim)
        .map(|_| Val::Finite(random_rational(rng, max_w, max_den)))
        .collect();
    BuildingPoint::new(basis, weights).unwrap()
}

/// Random seminorm with integer weights and at least one finite and one
/// infinite weight.
pub fn random_boundary_point(rng: &mut ChaCha8Rng, dim: usize, c: FieldConfig) -> BuildingPoint {
    assert!(dim >= 2);
    let basis = random_int_basis(rng, dim, c);
    loop {
        let weights: Vec<Val> = (0..dim)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Val::Infinite
                } else {
                    Val::from_integer(rng.gen_range(-3..=3))
                }
            })
            .collect();
        let finite = weights.iter().filter(|w| w.is_finite()).count();
        if finite >= 1 && finite < dim {
            return BuildingPoint::new(basis, weights).unwrap();
        }
    }
}

pub fn rational_vec(rng: &mut ChaCha8Rng, dim: usize, max_num: i64, max_den: i64) -> Vec<Rational> {
    (0..dim)
        .map(|_| random_rational(rng, max_num, max_den))
        .collect()
}
