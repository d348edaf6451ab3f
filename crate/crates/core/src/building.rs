//! The space of diagonalized (semi)norms on `k^(d+1)` modulo homothety:
//! points, apartments, the `GL`-action, relative positions, the CAT(0)
//! metric, stabilizers, folding by elementary unipotents, and the Cartan
//! decomposition.
//!
//! A point is a pair (basis `B`, weights `w`), representing the additive
//! norm `A(x) = min_i (v(λ_i) + w_i)` where `λ = B⁻¹·x`. Weights live in
//! `Q ∪ {+∞}`; a `+∞` weight puts the corresponding basis column into the
//! kernel, so the point is a boundary seminorm. The homothety class is the
//! weight vector up to a common additive shift; the canonical
//! representative has minimum finite weight 0.
//!
//! Two norms with rational weights need not be co-diagonalizable over the
//! base field before the weights are cleared to the value group; the
//! common-basis routine therefore lifts both unit-ball lattices to the
//! ramified extension `k_M` with `M` the lcm of the weight denominators,
//! where a Smith normal form of the transition matrix produces a basis
//! adapted to both points at once. All class-level outputs (relative
//! position, distance) are rational and independent of the lift.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{diagonal_from_exponents, snf_dvr, Matrix};
use crate::scalars::{rational_pow, ExtScalar, FieldConfig, Rational, Val};

/// A diagonalized seminorm: basis matrix plus weight vector, modulo
/// homothety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingPoint {
    basis: Matrix,
    weights: Vec<Val>,
    cfg: FieldConfig,
    normalized: bool,
}

impl BuildingPoint {
    /// Builds a point from an invertible basis matrix and `d+1` weights,
    /// at least one of which must be finite.
    pub fn new(basis: Matrix, weights: Vec<Val>) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch("basis must be square".into()));
        }
        if basis.rows() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for dimension {}",
                weights.len(),
                basis.rows()
            )));
        }
        if weights.iter().all(|w| w.is_infinite()) {
            return Err(Error::InvalidInput(
                "all weights infinite: the zero seminorm is excluded".into(),
            ));
        }
        if basis.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let cfg = basis.config();
        let normalized = min_finite(&weights).is_zero();
        Ok(BuildingPoint { basis, weights, cfg, normalized })
    }

    /// The class of the standard lattice: identity basis, zero weights.
    pub fn standard_vertex(dim: usize, cfg: FieldConfig) -> Self {
        BuildingPoint {
            basis: Matrix::identity(dim, cfg),
            weights: vec![Val::zero(); dim],
            cfg,
            normalized: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn config(&self) -> FieldConfig {
        self.cfg
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn weights(&self) -> &[Val] {
        &self.weights
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// True when every weight is finite (an interior point of the
    /// compactification).
    pub fn is_norm(&self) -> bool {
        self.weights.iter().all(|w| w.is_finite())
    }

    pub fn finite_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i].is_finite()).collect()
    }

    pub fn infinite_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i].is_infinite()).collect()
    }

    /// Finite weights as rationals; errors on boundary points.
    pub fn finite_weights(&self) -> Result<Vec<Rational>> {
        self.weights
            .iter()
            .map(|w| {
                w.as_finite().cloned().ok_or_else(|| {
                    Error::InvalidInput("boundary seminorm where a norm is required".into())
                })
            })
            .collect()
    }

    /// Evaluates the additive seminorm at a coordinate vector:
    /// `min_i (v(λ_i) + w_i)` with `λ = basis⁻¹·vec`. Returns `+∞` exactly
    /// on the kernel subspace.
    pub fn eval(&self, vec: &[ExtScalar]) -> Result<Val> {
        if vec.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in dimension {}",
                vec.len(),
                self.dim()
            )));
        }
        let lambda = self.basis.solve(vec)?;
        Ok(Val::min_of(
            lambda
                .iter()
                .zip(&self.weights)
                .map(|(l, w)| l.val().plus(w)),
        ))
    }

    /// [`eval`](Self::eval) on a rational vector.
    pub fn eval_rational(&self, vec: &[Rational]) -> Result<Val> {
        let lifted: Vec<ExtScalar> = vec
            .iter()
            .map(|r| ExtScalar::from_rational(r.clone(), self.cfg))
            .collect();
        self.eval(&lifted)
    }

    /// The canonical homothety representative: minimum finite weight 0.
    /// Idempotent.
    pub fn normalize(&self) -> BuildingPoint {
        let shift = min_finite(&self.weights);
        if shift.is_zero() {
            let mut out = self.clone();
            out.normalized = true;
            return out;
        }
        let weights = self
            .weights
            .iter()
            .map(|w| match w {
                Val::Finite(r) => Val::Finite(r - &shift),
                Val::Infinite => Val::Infinite,
            })
            .collect();
        BuildingPoint {
            basis: self.basis.clone(),
            weights,
            cfg: self.cfg,
            normalized: true,
        }
    }

    /// Embeds the point into `k_M` coordinates, `m | M`.
    pub fn lift(&self, target: FieldConfig) -> Result<BuildingPoint> {
        Ok(BuildingPoint {
            basis: self.basis.lift(target)?,
            weights: self.weights.clone(),
            cfg: target,
            normalized: self.normalized,
        })
    }
}

fn min_finite(weights: &[Val]) -> Rational {
    weights
        .iter()
        .filter_map(|w| w.as_finite())
        .min()
        .cloned()
        .expect("at least one finite weight")
}

/// The set of classes diagonalized by one fixed basis.
#[derive(Clone, Debug)]
pub struct Apartment {
    basis: Matrix,
}

impl Apartment {
    pub fn new(basis: Matrix) -> Result<Self> {
        if !basis.is_square() || basis.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Apartment { basis })
    }

    pub fn standard(dim: usize, cfg: FieldConfig) -> Self {
        Apartment { basis: Matrix::identity(dim, cfg) }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// The point of this apartment with the given weights.
    pub fn point(&self, weights: Vec<Val>) -> Result<BuildingPoint> {
        BuildingPoint::new(self.basis.clone(), weights)
    }
}

/// Sorted vector of weight differences encoding the relative position of
/// two points; the invariant-factor data of the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelPos {
    deltas: Vec<Rational>,
    centered: bool,
}

impl RelPos {
    pub fn from_deltas(mut deltas: Vec<Rational>) -> Self {
        deltas.sort();
        RelPos { deltas, centered: false }
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn mean(&self) -> Rational {
        let sum: Rational = self.deltas.iter().sum();
        sum / Rational::from_integer(BigInt::from(self.deltas.len() as i64))
    }

    /// Mean-centered representative (sum of deltas = 0): the class-level
    /// canonical form, invariant under homothety of either argument.
    pub fn centered(&self) -> RelPos {
        let mean = self.mean();
        RelPos {
            deltas: self.deltas.iter().map(|d| d - &mean).collect(),
            centered: true,
        }
    }

    /// Shifted so the smallest delta is 0: the canonical Weyl-chamber
    /// representative used by [`reduce_to_chamber`].
    pub fn min_zero(&self) -> RelPos {
        let min = self.deltas.first().cloned().unwrap_or_else(Rational::zero);
        RelPos {
            deltas: self.deltas.iter().map(|d| d - &min).collect(),
            centered: false,
        }
    }

    /// Negated and reversed (still ascending). Swapping the two arguments
    /// of [`relpos`] duals the result; the same relation ties the Cartan
    /// exponents of `g` to `relpos(o, g·o)` at the standard vertex `o`,
    /// because weights translate by minus the valuation.
    pub fn dual(&self) -> RelPos {
        RelPos {
            deltas: self.deltas.iter().rev().map(|d| -d).collect(),
            centered: self.centered,
        }
    }

    /// True when all deltas coincide, i.e. the two points are the same
    /// homothety class.
    pub fn is_constant(&self) -> bool {
        self.deltas.windows(2).all(|w| w[0] == w[1])
    }

    /// Largest minus smallest delta.
    pub fn gap(&self) -> Rational {
        match (self.deltas.first(), self.deltas.last()) {
            (Some(a), Some(b)) => b - a,
            _ => Rational::zero(),
        }
    }
}

/// A basis adapted to two norms at once, with the weight vectors of both
/// points in that basis. The basis may live over a ramified extension
/// `k_M`; each input equals `(basis, weights)` exactly as a norm over
/// `k_M`.
#[derive(Clone, Debug)]
pub struct CommonBasis {
    pub basis: Matrix,
    pub x_weights: Vec<Rational>,
    pub y_weights: Vec<Rational>,
}

/// Computes a basis simultaneously adapted to two norms.
///
/// The unit balls are the column lattices of `B_x·diag(θ^(−M·w_i))` over
/// the valuation ring of `k_M`; a Smith normal form of the transition
/// matrix between them yields the common basis from its left factor, and
/// the negated exponents are the weights of `y`. When all weights are
/// integers, `M = m` and no extension is introduced.
pub fn common_basis(x: &BuildingPoint, y: &BuildingPoint) -> Result<CommonBasis> {
    check_same_space(x, y)?;
    let wx = x.finite_weights()?;
    let wy = y.finite_weights()?;

    let mut m = BigInt::from(x.config().ramification());
    for w in wx.iter().chain(&wy) {
        m = m.lcm(w.denom());
    }
    let m = u32::try_from(&m)
        .map_err(|_| Error::InvalidInput("weight denominators too large".into()))?;
    let kcfg = x.config().with_ramification(m)?;

    let bx = x.basis.lift(kcfg)?;
    let by = y.basis.lift(kcfg)?;
    if bx == by {
        return Ok(CommonBasis { basis: bx, x_weights: wx, y_weights: wy });
    }

    let neg = |w: &[Rational]| -> Vec<Rational> { w.iter().map(|r| -r).collect() };
    let cx = bx.mul(&diagonal_from_exponents(&neg(&wx), kcfg));
    let cy = by.mul(&diagonal_from_exponents(&neg(&wy), kcfg));
    let transition = cx.inverse()?.mul(&cy);
    let snf = snf_dvr(&transition)?;
    let basis = cx.mul(&snf.u);
    let x_weights = vec![Rational::zero(); x.dim()];
    let y_weights = neg(&snf.exponents);
    Ok(CommonBasis { basis, x_weights, y_weights })
}

fn check_same_space(x: &BuildingPoint, y: &BuildingPoint) -> Result<()> {
    if x.config() != y.config() {
        return Err(Error::ConfigMismatch(format!(
            "points over {} and {}",
            x.config(),
            y.config()
        )));
    }
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(format!(
            "points of dimension {} and {}",
            x.dim(),
            y.dim()
        )));
    }
    Ok(())
}

/// Relative position of two norms: the sorted vector of weight
/// differences `w_y − w_x` in a common adapted basis. Constant exactly
/// when the two homothety classes coincide; the mean-centered form is
/// independent of all representative choices.
pub fn relpos(x: &BuildingPoint, y: &BuildingPoint) -> Result<RelPos> {
    let cb = common_basis(x, y)?;
    let deltas = cb
        .y_weights
        .iter()
        .zip(&cb.x_weights)
        .map(|(a, b)| a - b)
        .collect();
    Ok(RelPos::from_deltas(deltas))
}

/// Squared CAT(0) distance: `Σ (δ_i − δ̄)²` over the relative position.
/// The scalar product is the standard one on weight coordinates modulo
/// the diagonal, with `v(p) = 1` as unit length, so distances are in
/// valuation units.
pub fn distance2(x: &BuildingPoint, y: &BuildingPoint) -> Result<Rational> {
    let centered = relpos(x, y)?.centered();
    Ok(centered.deltas().iter().map(|d| d * d).sum())
}

/// Exact equality of the two seminorms (not just of their classes).
pub fn norm_equal(x: &BuildingPoint, y: &BuildingPoint) -> Result<bool> {
    let cb = common_basis(x, y)?;
    Ok(cb.x_weights == cb.y_weights)
}

/// Equality of homothety classes.
pub fn class_equal(x: &BuildingPoint, y: &BuildingPoint) -> Result<bool> {
    Ok(relpos(x, y)?.is_constant())
}

/// The action `g·A = A ∘ g⁻¹`: returns `(g·basis, weights)`, normalized.
/// A diagonal `g = diag(λ_i)` in the point's own basis shifts weights by
/// `w_i ↦ w_i − v(λ_i)`.
pub fn act(g: &Matrix, x: &BuildingPoint) -> Result<BuildingPoint> {
    Ok(act_unnormalized(g, x)?.normalize())
}

/// The action without passing to the canonical homothety representative;
/// the result evaluates exactly as `vec ↦ A_x(g⁻¹·vec)`.
pub fn act_unnormalized(g: &Matrix, x: &BuildingPoint) -> Result<BuildingPoint> {
    check_matrix_arg(g, x)?;
    BuildingPoint::new(g.mul(&x.basis), x.weights.clone())
}

fn check_matrix_arg(g: &Matrix, x: &BuildingPoint) -> Result<()> {
    if g.config() != x.config() {
        return Err(Error::ConfigMismatch(format!(
            "matrix over {} acting on a point over {}",
            g.config(),
            x.config()
        )));
    }
    if !g.is_square() || g.rows() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix acting in dimension {}",
            g.rows(),
            g.cols(),
            x.dim()
        )));
    }
    Ok(())
}

/// Which stabilizer to test: the norm itself or its homothety class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabMode {
    Norm,
    Class,
}

/// Stabilizer membership.
///
/// In `Norm` mode, writes `h = B⁻¹·g·B` and tests
/// `v(h_ij) ≥ w_j − w_i` for all `i, j` together with `v(det h) = 0`;
/// this is the additive transcription of the weight-interval condition
/// on matrix entries. In `Class` mode, tests whether `g` fixes the
/// homothety class, via the relative position of `g·x` and `x`.
pub fn stabilizes(g: &Matrix, x: &BuildingPoint, mode: StabMode) -> Result<bool> {
    check_matrix_arg(g, x)?;
    match mode {
        StabMode::Class => class_equal(&act(g, x)?, x),
        StabMode::Norm => {
            let w = x.finite_weights()?;
            let h = x.basis.inverse()?.mul(g).mul(&x.basis);
            if h.det().is_zero() {
                return Err(Error::SingularMatrix);
            }
            for i in 0..x.dim() {
                for j in 0..x.dim() {
                    let bound = Val::Finite(&w[j] - &w[i]);
                    if h.get(i, j).val() < bound {
                        return Ok(false);
                    }
                }
            }
            Ok(h.det().val() == Val::zero())
        }
    }
}

/// Cartan decomposition `g = U·diag(p^(a_i))·W` over the base field, with
/// `U`, `W` unimodular and the exponents ascending.
#[derive(Clone, Debug)]
pub struct CartanDecomposition {
    pub u: Matrix,
    pub exponents: RelPos,
    pub w: Matrix,
}

impl CartanDecomposition {
    pub fn reconstruct(&self) -> Matrix {
        let cfg = self.u.config();
        self.u
            .mul(&diagonal_from_exponents(self.exponents.deltas(), cfg))
            .mul(&self.w)
    }
}

/// Computes the Cartan decomposition of an invertible base-field matrix:
/// a global p-power is cleared first so the scaled matrix has entries of
/// non-negative valuation, then the Smith normal form over `Z_(p)` yields
/// the unimodular factors, and the cleared power is added back to the
/// exponents.
pub fn cartan(g: &Matrix) -> Result<CartanDecomposition> {
    if g.config().ramification() != 1 {
        return Err(Error::ConfigMismatch(
            "Cartan decomposition is defined over the base field (m = 1)".into(),
        ));
    }
    if !g.is_square() {
        return Err(Error::DimensionMismatch("Cartan decomposition of a non-square matrix".into()));
    }
    let s = match g.min_entry_val() {
        Val::Finite(s) => s.to_integer(),
        Val::Infinite => return Err(Error::SingularMatrix),
    };
    let s = i64::try_from(&s).expect("valuation fits in i64");
    let cfg = g.config();
    let cleared = g.scale(&ExtScalar::from_rational(rational_pow(cfg.prime(), -s), cfg));
    let snf = snf_dvr(&cleared)?;
    let shift = Rational::from_integer(BigInt::from(s));
    let exponents: Vec<Rational> = snf.exponents.iter().map(|e| e + &shift).collect();
    Ok(CartanDecomposition {
        u: snf.u,
        exponents: RelPos::from_deltas(exponents),
        w: snf.w,
    })
}

/// Elementary unipotent `id + λ·E_ij`.
pub fn unipotent(dim: usize, i: usize, j: usize, lam: &ExtScalar) -> Matrix {
    assert!(i < dim && j < dim && i != j, "unipotent indices out of range");
    let mut m = Matrix::identity(dim, lam.config());
    m.set(i, j, lam.clone());
    m
}

/// Whether the elementary unipotent `u_ij(λ)` fixes the norm `x`
/// (weights read in `x`'s own basis): true exactly when
/// `v(λ) ≥ w_j − w_i`. Agrees with the direct fixed-point test of the
/// action.
pub fn fold_fixed(i: usize, j: usize, lam: &ExtScalar, x: &BuildingPoint) -> Result<bool> {
    let d = x.dim();
    if i >= d || j >= d || i == j {
        return Err(Error::IndexOutOfRange(format!(
            "unipotent indices ({}, {}) in dimension {}",
            i, j, d
        )));
    }
    let w = x.finite_weights()?;
    Ok(lam.val() >= Val::Finite(&w[j] - &w[i]))
}

/// The color of a vertex: `(v(det basis) − Σ weights) mod (d+1)`, measured
/// in uniformizer units of the configured field (for `m = 1` this is the
/// plain determinant-valuation formula). Errors when some normalized
/// weight is not in the value group.
pub fn vertex_type(x: &BuildingPoint) -> Result<usize> {
    let xn = x.normalize();
    let m = BigInt::from(xn.config().ramification());
    let mut total = match xn.basis.det().val() {
        Val::Finite(v) => v,
        Val::Infinite => return Err(Error::SingularMatrix),
    };
    for w in xn.weights() {
        match w {
            Val::Finite(r) => {
                if !(r * Rational::from_integer(m.clone())).is_integer() {
                    return Err(Error::NotAVertex(format!(
                        "normalized weight {} is not in the value group",
                        r
                    )));
                }
                total -= r;
            }
            Val::Infinite => {
                return Err(Error::NotAVertex("boundary seminorm".into()));
            }
        }
    }
    let scaled = total * Rational::from_integer(m);
    debug_assert!(scaled.is_integer());
    let modulus = BigInt::from(xn.dim() as i64);
    let color = scaled.to_integer().mod_floor(&modulus);
    Ok(usize::try_from(&color).expect("color in range"))
}

/// Canonical representative of `x` in the closed Weyl chamber with tip
/// `o`: the relative position from `o` shifted so its smallest entry is
/// zero. Two norms lie in the same orbit of the stabilizer of `o` exactly
/// when their outputs coincide.
pub fn reduce_to_chamber(x: &BuildingPoint, o: &BuildingPoint) -> Result<RelPos> {
    vertex_type(o)?;
    Ok(relpos(o, x)?.min_zero())
}
