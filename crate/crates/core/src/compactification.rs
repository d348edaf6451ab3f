//! The seminorm boundary: strata indexed by kernel subspaces, ray limits
//! into the boundary, stabilizers of boundary points, and the extension of
//! a diagonalized seminorm to a multiplicative min-plus seminorm on the
//! polynomial algebra (the Gauss extension).
//!
//! In the multiplicative picture a seminorm with kernel `W` is a norm on
//! `V/W` composed with the quotient map; here that is a point whose
//! infinite-weight basis columns span `W`, and the stratum data is the
//! kernel together with the induced norm written in the coordinates of the
//! surviving columns (taken in their original order).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::building::{class_equal, stabilizes, BuildingPoint, StabMode};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{val_p, Rational, Val};

/// A boundary stratum: the kernel subspace and the induced norm on the
/// quotient, written in the coordinates of the chosen complement (the
/// finite-weight basis columns in their original order).
#[derive(Clone, Debug)]
pub struct Stratum {
    kernel: Matrix,
    quotient: BuildingPoint,
}

impl Stratum {
    /// Basis of the kernel subspace as matrix columns (zero columns for
    /// the open stratum).
    pub fn kernel(&self) -> &Matrix {
        &self.kernel
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.cols()
    }

    /// The induced norm on the quotient space, in complement coordinates.
    pub fn quotient_point(&self) -> &BuildingPoint {
        &self.quotient
    }
}

/// Splits a normalized point into its stratum data: kernel spanned by the
/// infinite-weight basis columns, quotient norm carried by the
/// finite-weight columns. Interior points get an empty kernel.
pub fn stratum_of(x: &BuildingPoint) -> Stratum {
    let xn = x.normalize();
    let cfg = xn.config();
    let fin = xn.finite_indices();
    let inf = xn.infinite_indices();
    let kernel = columns(xn.basis(), &inf);
    let weights: Vec<Val> = fin.iter().map(|&i| xn.weights()[i].clone()).collect();
    let quotient = BuildingPoint::new(Matrix::identity(fin.len(), cfg), weights)
        .expect("a seminorm has at least one finite weight");
    Stratum { kernel, quotient }
}

fn columns(m: &Matrix, idx: &[usize]) -> Matrix {
    if idx.is_empty() {
        return Matrix::empty_cols(m.rows(), m.config());
    }
    let blocks: Vec<Matrix> = idx.iter().map(|&j| m.col_range(j, j + 1).unwrap()).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Matrix::hstack(&refs).unwrap()
}

/// Rebuilds the boundary seminorm from stratum data: `full_basis` must
/// list the complement lifts first and the kernel basis last; the result
/// carries the quotient weights on the lifts and `+∞` on the kernel.
/// [`stratum_of`] is a left inverse.
pub fn quotient_embed(s: &Stratum, full_basis: &Matrix) -> Result<BuildingPoint> {
    let n = full_basis.rows();
    let q = s.quotient.dim();
    let k = s.kernel_dim();
    if !full_basis.is_square() || q + k != n {
        return Err(Error::DimensionMismatch(format!(
            "full basis {}x{} against quotient dimension {} + kernel dimension {}",
            full_basis.rows(),
            full_basis.cols(),
            q,
            k
        )));
    }
    let lifts = full_basis.col_range(0, q)?;
    let kernel = full_basis.col_range(q, n)?;
    // Compose with the quotient point's own basis so the lifts really
    // diagonalize the induced norm.
    let adapted = lifts.mul(s.quotient.basis());
    let basis = Matrix::hstack(&[&adapted, &kernel])?;
    let mut weights: Vec<Val> = s.quotient.weights().to_vec();
    weights.extend(std::iter::repeat(Val::Infinite).take(k));
    BuildingPoint::new(basis, weights)
}

/// Equality of seminorm classes: the kernels coincide as subspaces and
/// the induced quotient norms are the same homothety class.
pub fn seminorm_equal(x: &BuildingPoint, y: &BuildingPoint) -> Result<bool> {
    if x.config() != y.config() || x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(
            "seminorm comparison needs matching spaces".into(),
        ));
    }
    let xn = x.normalize();
    let yn = y.normalize();
    let sx = stratum_of(&xn);
    let sy = stratum_of(&yn);
    if sx.kernel_dim() != sy.kernel_dim() {
        return Ok(false);
    }
    if sx.kernel_dim() == 0 {
        return class_equal(&xn, &yn);
    }
    // Kernel subspaces agree iff stacking them side by side adds no rank.
    let stacked = Matrix::hstack(&[sx.kernel(), sy.kernel()])?;
    if stacked.rank() != sx.kernel_dim() {
        return Ok(false);
    }
    let qy = transport_quotient(&xn, &yn)?;
    class_equal(sx.quotient_point(), &qy)
}

/// Writes the quotient norm of `y` in the quotient coordinates of `x`
/// (both points must have the same kernel subspace).
fn transport_quotient(xn: &BuildingPoint, yn: &BuildingPoint) -> Result<BuildingPoint> {
    let fin_x = xn.finite_indices();
    let q = fin_x.len();
    let full_x = Matrix::hstack(&[
        &columns(xn.basis(), &fin_x),
        &columns(xn.basis(), &xn.infinite_indices()),
    ])?;
    let cy = columns(yn.basis(), &yn.finite_indices());
    let coords = full_x.inverse()?.mul(&cy);
    // Rows past q are kernel components, irrelevant modulo W.
    let mut data = Vec::with_capacity(q * cy.cols());
    for i in 0..q {
        for j in 0..cy.cols() {
            data.push(coords.get(i, j).clone());
        }
    }
    let qbasis = Matrix::new(q, cy.cols(), data, xn.config())?;
    let wy: Vec<Val> = yn
        .finite_indices()
        .iter()
        .map(|&i| yn.weights()[i].clone())
        .collect();
    BuildingPoint::new(qbasis, wy)
}

/// Stabilizer test for a boundary class: `g` must map the kernel into
/// itself and the induced quotient matrix must fix the quotient class.
/// Equivalent to `g·x ∼ x` as seminorms.
pub fn boundary_stab_check(g: &Matrix, x: &BuildingPoint) -> Result<bool> {
    if g.config() != x.config() || g.rows() != x.dim() || !g.is_square() {
        return Err(Error::DimensionMismatch(
            "stabilizer test needs a square matrix of the point's dimension".into(),
        ));
    }
    if g.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let xn = x.normalize();
    let s = stratum_of(&xn);
    if s.kernel_dim() == 0 {
        return stabilizes(g, &xn, StabMode::Class);
    }
    // Kernel stability: g·W ⊆ W.
    let gk = g.mul(s.kernel());
    let stacked = Matrix::hstack(&[s.kernel(), &gk])?;
    if stacked.rank() != s.kernel_dim() {
        return Ok(false);
    }
    // Induced matrix on the quotient, in complement coordinates: the top
    // left block of the conjugate by (complement | kernel).
    let fin = xn.finite_indices();
    let q = fin.len();
    let full = Matrix::hstack(&[&columns(xn.basis(), &fin), s.kernel()])?;
    let h = full.inverse()?.mul(g).mul(&full);
    let mut data = Vec::with_capacity(q * q);
    for i in 0..q {
        for j in 0..q {
            data.push(h.get(i, j).clone());
        }
    }
    let quotient_matrix = Matrix::new(q, q, data, xn.config())?;
    stabilizes(&quotient_matrix, s.quotient_point(), StabMode::Class)
}

/// The boundary limit of the ray `t ↦ (basis, w + t·dir)` as `t → ∞`:
/// with `I = argmin(dir)`, the weights keep their values on `I` and become
/// `+∞` elsewhere. The direction must separate coordinates (a constant
/// direction moves along a homothety, and the ray is a single class).
pub fn ray_limit(x: &BuildingPoint, dir: &[Rational]) -> Result<BuildingPoint> {
    if dir.len() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "direction of length {} in dimension {}",
            dir.len(),
            x.dim()
        )));
    }
    let w = x.finite_weights()?;
    let min = dir.iter().min().cloned().expect("nonempty direction");
    if dir.iter().all(|d| *d == min) {
        return Err(Error::ConstantDirection);
    }
    let weights: Vec<Val> = dir
        .iter()
        .zip(&w)
        .map(|(d, wi)| {
            if *d == min {
                Val::Finite(wi.clone())
            } else {
                Val::Infinite
            }
        })
        .collect();
    Ok(BuildingPoint::new(x.basis().clone(), weights)?.normalize())
}

/// A polynomial in the coordinates dual to a point's basis: finitely many
/// monomials with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate variable `x_i`.
    pub fn variable(i: usize, nvars: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        let mut p = Polynomial::zero(nvars);
        p.add_term(exp, Rational::one());
        p
    }

    pub fn monomial(exp: Vec<u32>, coef: Rational, nvars: usize) -> Result<Self> {
        if exp.len() != nvars {
            return Err(Error::DimensionMismatch(format!(
                "exponent of length {} in {} variables",
                exp.len(),
                nvars
            )));
        }
        let mut p = Polynomial::zero(nvars);
        p.add_term(exp, coef);
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add_term(&mut self, exp: Vec<u32>, coef: Rational) {
        assert_eq!(exp.len(), self.nvars, "exponent length mismatch");
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::constant(Rational::one(), self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The linear form `Σ coeffs_i · x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0; coeffs.len()];
            exp[i] = 1;
            p.add_term(exp, c.clone());
        }
        p
    }
}

/// The Gauss extension of the seminorm to polynomials: the minimum over
/// terms of `v_p(a_I) + Σ_k I_k·w_k`, with `+∞` saturation. The
/// polynomial must be written in the coordinates dual to `x`'s basis
/// (transport with [`poly_change_basis`] first otherwise).
///
/// Restricted to degree-one monomials this reproduces [`BuildingPoint::eval`]
/// on basis vectors: evaluation of polynomials extends the point, and
/// restriction to linear forms recovers it.
pub fn eval_poly(x: &BuildingPoint, f: &Polynomial) -> Val {
    assert_eq!(
        f.nvars(),
        x.dim(),
        "polynomial in {} variables against dimension {}",
        f.nvars(),
        x.dim()
    );
    let cfg = x.config();
    Val::min_of(f.terms.iter().map(|(exp, coef)| {
        let mut term = val_p(coef, &cfg);
        for (k, &e) in exp.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = match &x.weights()[k] {
                Val::Finite(w) => {
                    Val::Finite(w * Rational::from_integer(BigInt::from(e as i64)))
                }
                Val::Infinite => Val::Infinite,
            };
            term = term.plus(&factor);
        }
        term
    }))
}

/// Rewrites a polynomial by substituting each variable with the linear
/// form given by the corresponding **column** of `b`, so a degree-one
/// polynomial with coefficient vector `a` (the polynomial representing
/// the vector `a`) becomes the polynomial representing `b·a`. Degree is
/// preserved.
///
/// To express a standard-coordinates polynomial in the coordinates dual
/// to a point's basis `B`, transport with `b = B⁻¹`; the group action on
/// polynomial seminorms (`g·α = α ∘ g⁻¹`) transports with `b = g⁻¹`.
/// Base-field matrices only.
pub fn poly_change_basis(f: &Polynomial, b: &Matrix) -> Result<Polynomial> {
    if !b.is_square() || b.rows() != f.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against {} variables",
            b.rows(),
            b.cols(),
            f.nvars()
        )));
    }
    if b.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let rows = b.to_rational_rows()?;
    let n = f.nvars();
    let linears: Vec<Polynomial> = (0..n)
        .map(|i| {
            let column: Vec<Rational> = (0..n).map(|j| rows[j][i].clone()).collect();
            Polynomial::linear_form(&column)
        })
        .collect();
    let mut out = Polynomial::zero(n);
    for (exp, coef) in f.terms.iter() {
        let mut term = Polynomial::constant(coef.clone(), n);
        for (i, &e) in exp.iter().enumerate() {
            if e > 0 {
                term = term.mul(&linears[i].pow(e));
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}
