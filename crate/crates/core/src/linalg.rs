//! Exact dense matrices over the base field and over `k_m`, with the
//! normal forms used everywhere else: Smith normal form over the valuation
//! ring (pivoting on entries of minimal valuation) and a Hermite normal
//! form over the localization `Z_(p)` for canonical lattice keys.
//!
//! Invariant factors are computed by exact pivoting, never by tropical
//! minors: p-adic cancellation makes the min-plus permanent a lower bound
//! only (e.g. `[[1,1],[1,3]]` at `p = 2` has tropical bound 0 but exponent
//! sum `v(det) = 1`). The tropical bound survives as a test oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{rational_pow, val_p, ExtScalar, FieldConfig, Rational, Val};

/// Dense row-major matrix with [`ExtScalar`] entries sharing one
/// [`FieldConfig`] (`m = 1` specializes to rationals).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ExtScalar>,
    cfg: FieldConfig,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExtScalar>, cfg: FieldConfig) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|e| e.config() != cfg) {
            return Err(Error::ConfigMismatch(
                "all matrix entries must share the field configuration".into(),
            ));
        }
        Ok(Matrix { rows, cols, data, cfg })
    }

    pub fn identity(n: usize, cfg: FieldConfig) -> Self {
        let mut data = vec![ExtScalar::zero(cfg); n * n];
        for i in 0..n {
            data[i * n + i] = ExtScalar::one(cfg);
        }
        Matrix { rows: n, cols: n, data, cfg }
    }

    pub fn from_rational_rows(rows: &[Vec<Rational>], cfg: FieldConfig) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().cloned())
            .map(|x| ExtScalar::from_rational(x, cfg))
            .collect();
        Matrix::new(r, c, data, cfg)
    }

    /// Test/demo convenience: integer entries.
    pub fn from_int_rows(rows: &[Vec<i64>], cfg: FieldConfig) -> Result<Self> {
        let rats: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| row.iter().map(|&n| Rational::from_integer(BigInt::from(n))).collect())
            .collect();
        Matrix::from_rational_rows(&rats, cfg)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn config(&self) -> FieldConfig {
        self.cfg
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExtScalar) {
        assert_eq!(v.config(), self.cfg);
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &ExtScalar> {
        self.data.iter()
    }

    pub fn col(&self, j: usize) -> Vec<ExtScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn col_range(&self, lo: usize, hi: usize) -> Result<Matrix> {
        let mut data = Vec::with_capacity(self.rows * (hi - lo));
        for i in 0..self.rows {
            for j in lo..hi {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::new(self.rows, hi - lo, data, self.cfg)
    }

    /// Horizontal concatenation of column blocks; empty blocks are allowed.
    pub fn hstack(blocks: &[&Matrix]) -> Result<Matrix> {
        let nonempty: Vec<&&Matrix> = blocks.iter().filter(|b| b.cols > 0).collect();
        let rows = nonempty
            .first()
            .map(|b| b.rows)
            .ok_or_else(|| Error::DimensionMismatch("hstack of nothing".into()))?;
        if nonempty.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch("hstack row mismatch".into()));
        }
        let cfg = nonempty[0].cfg;
        let cols: usize = nonempty.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in &nonempty {
                for j in 0..b.cols {
                    data.push(b.get(i, j).clone());
                }
            }
        }
        Matrix::new(rows, cols, data, cfg)
    }

    /// Matrix with zero columns, usable as an empty `hstack` block.
    pub fn empty_cols(rows: usize, cfg: FieldConfig) -> Matrix {
        Matrix { rows, cols: 0, data: Vec::new(), cfg }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        assert_eq!(self.cfg, other.cfg, "matrix product config mismatch");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ExtScalar::zero(self.cfg);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(other.get(k, j)));
                }
                data.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data, cfg: self.cfg }
    }

    pub fn mul_vec(&self, v: &[ExtScalar]) -> Result<Vec<ExtScalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = ExtScalar::zero(self.cfg);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() && !v[k].is_zero() {
                        acc = acc.add(&a.mul(&v[k]));
                    }
                }
                acc
            })
            .collect())
    }

    /// Rescales column `j` by `c`.
    pub fn scale_col(&mut self, j: usize, c: &ExtScalar) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(c);
            self.set(i, j, v);
        }
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &ExtScalar) -> Matrix {
        let data = self.data.iter().map(|e| e.mul(c)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, cfg: self.cfg }
    }

    /// Exact determinant: cofactor expansion for small matrices (entries
    /// stay bounded by products of inputs), Gaussian elimination over the
    /// field beyond that.
    pub fn det(&self) -> ExtScalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows <= 5 {
            let cols: Vec<usize> = (0..self.cols).collect();
            return self.det_minor(0, &cols);
        }
        self.det_eliminate()
    }

    fn det_minor(&self, row: usize, cols: &[usize]) -> ExtScalar {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = ExtScalar::zero(self.cfg);
        for (k, &j) in cols.iter().enumerate() {
            let pivot = self.get(row, j);
            if pivot.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&c| c != j)
                .collect();
            let minor = self.det_minor(row + 1, &rest);
            let term = pivot.mul(&minor);
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    fn det_eliminate(&self) -> ExtScalar {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = ExtScalar::one(self.cfg);
        for k in 0..n {
            let pivot = match (k..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => i,
                None => return ExtScalar::zero(self.cfg),
            };
            if pivot != k {
                a.swap_rows(pivot, k);
                det = det.neg();
            }
            let pk = a.get(k, k).clone();
            det = det.mul(&pk);
            let pk_inv = pk.inv().expect("nonzero pivot");
            for i in k + 1..n {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let factor = a.get(i, k).mul(&pk_inv);
                for j in k..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, self.cfg);
        for k in 0..n {
            let pivot = (k..n)
                .find(|&i| !a.get(i, k).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != k {
                a.swap_rows(pivot, k);
                inv.swap_rows(pivot, k);
            }
            let pk_inv = a.get(k, k).inv().expect("nonzero pivot");
            for j in 0..n {
                let v = a.get(k, j).mul(&pk_inv);
                a.set(k, j, v);
                let w = inv.get(k, j).mul(&pk_inv);
                inv.set(k, j, w);
            }
            for i in 0..n {
                if i == k || a.get(i, k).is_zero() {
                    continue;
                }
                let factor = a.get(i, k).clone();
                for j in 0..n {
                    let v = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                    a.set(i, j, v);
                    let w = inv.get(i, j).sub(&factor.mul(inv.get(k, j)));
                    inv.set(i, j, w);
                }
            }
        }
        Ok(inv)
    }

    /// Solves `A·x = b` exactly. Errors with [`Error::SingularMatrix`] when
    /// the matrix is not invertible.
    pub fn solve(&self, b: &[ExtScalar]) -> Result<Vec<ExtScalar>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        self.inverse()?.mul_vec(b)
    }

    /// Column rank, by exact elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for j in 0..a.cols {
            let pivot = match (rank..a.rows).find(|&i| !a.get(i, j).is_zero()) {
                Some(i) => i,
                None => continue,
            };
            a.swap_rows(pivot, rank);
            let inv = a.get(rank, j).inv().expect("nonzero pivot");
            for i in rank + 1..a.rows {
                if a.get(i, j).is_zero() {
                    continue;
                }
                let factor = a.get(i, j).mul(&inv);
                for jj in j..a.cols {
                    let v = a.get(i, jj).sub(&factor.mul(a.get(rank, jj)));
                    a.set(i, jj, v);
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    /// Minimum valuation over all entries (`∞` for the zero matrix).
    pub fn min_entry_val(&self) -> Val {
        Val::min_of(self.data.iter().map(|e| e.val()))
    }

    /// Membership in `GL` over the valuation ring: all entries have
    /// valuation `≥ 0` and `v(det) = 0`.
    ///
    /// The determinant condition is decided on the residue matrix: for
    /// entries in the valuation ring, `v(det) = 0` exactly when the
    /// reduction modulo the maximal ideal (coefficient `a_0` mod `p`,
    /// with `θ ↦ 0`) is invertible over `F_p`.
    pub fn is_unimodular(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        if self.data.iter().any(|e| e.val() < Val::zero()) {
            return false;
        }
        let p = self.cfg.prime();
        let n = self.rows;
        let mut residue = vec![0u64; n * n];
        for (k, e) in self.data.iter().enumerate() {
            // val ≥ 0 forces every coefficient to be p-integral.
            let a0 = &e.coeffs()[0];
            let num = mod_u64(a0.numer(), p);
            let den = mod_u64(a0.denom(), p);
            residue[k] = mulmod(num, modinv_u64(den, p), p);
        }
        residue_det_nonzero(&mut residue, n, p)
    }

    /// Entry-wise embedding into `k_M` for `m | M`.
    pub fn lift(&self, target: FieldConfig) -> Result<Matrix> {
        let data = self
            .data
            .iter()
            .map(|e| e.lift(target))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(self.rows, self.cols, data, target)
    }

    /// Entries as rationals, available only over the base field image.
    pub fn to_rational_rows(&self) -> Result<Vec<Vec<Rational>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        self.get(i, j).as_rational().cloned().ok_or_else(|| {
                            Error::ConfigMismatch(
                                "entry does not lie in the base field".into(),
                            )
                        })
                    })
                    .collect()
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i += c·row_k
    fn row_add(&mut self, i: usize, k: usize, c: &ExtScalar) {
        for j in 0..self.cols {
            let v = self.get(i, j).add(&c.mul(self.get(k, j)));
            self.set(i, j, v);
        }
    }

    /// col_j += c·col_k
    fn col_add(&mut self, j: usize, k: usize, c: &ExtScalar) {
        for i in 0..self.rows {
            let v = self.get(i, j).add(&c.mul(self.get(i, k)));
            self.set(i, j, v);
        }
    }

    fn scale_row(&mut self, i: usize, c: &ExtScalar) {
        for j in 0..self.cols {
            let v = self.get(i, j).mul(c);
            self.set(i, j, v);
        }
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.cfg)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form over the valuation ring: `M = U·D·W` with `U`, `W`
/// unimodular and `D = diag(θ^(m·e_i))`, exponents `e_i` non-decreasing
/// in `(1/m)Z`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: Matrix,
    pub exponents: Vec<Rational>,
    pub w: Matrix,
}

impl SnfResult {
    /// The diagonal middle factor as a matrix.
    pub fn diagonal(&self) -> Matrix {
        diagonal_from_exponents(&self.exponents, self.u.config())
    }

    /// `U·D·W`, for reconstruction checks.
    pub fn reconstruct(&self) -> Matrix {
        self.u.mul(&self.diagonal()).mul(&self.w)
    }
}

/// `diag(θ^(m·e_i))` for exponents in `(1/m)Z`.
pub fn diagonal_from_exponents(exponents: &[Rational], cfg: FieldConfig) -> Matrix {
    let n = exponents.len();
    let mut d = Matrix::identity(n, cfg);
    for (i, e) in exponents.iter().enumerate() {
        let scaled = e * Rational::from_integer(BigInt::from(cfg.ramification() as i64));
        assert!(
            scaled.is_integer(),
            "exponent {} outside the value group (1/{})Z",
            e,
            cfg.ramification()
        );
        let k = int_from(&scaled);
        d.set(i, i, ExtScalar::theta_pow(k, cfg));
    }
    d
}

fn int_from(r: &Rational) -> i64 {
    let n = r.to_integer();
    i64::try_from(&n).expect("exponent fits in i64")
}

/// Smith normal form over the valuation ring of `k_m`.
///
/// Repeatedly pivots on an entry of minimal valuation (ties broken by
/// smallest `(row, col)` lexicographically), clears its row and column by
/// exact division — the quotients have valuation `≥ 0` — and recurses on
/// the minor. Diagonal units are folded into `W`, and a final permutation
/// pass sorts the exponents.
pub fn snf_dvr(m: &Matrix) -> Result<SnfResult> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("Smith normal form of a non-square matrix".into()));
    }
    let n = m.rows();
    let cfg = m.config();
    let mut a = m.clone();
    let mut u = Matrix::identity(n, cfg);
    let mut w = Matrix::identity(n, cfg);

    for k in 0..n {
        // Minimal-valuation pivot in the active minor.
        let mut best: Option<(Val, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                let e = a.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let v = e.val();
                if best.as_ref().map_or(true, |(bv, _, _)| v < *bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let (_, pi, pj) = best.ok_or(Error::SingularMatrix)?;

        // Move the pivot to (k, k). Row swap is undone on U's columns,
        // column swap on W's rows (the accumulated factors stay inverse
        // to the operations applied to A, so M = U·A·W at every step).
        a.swap_rows(pi, k);
        u.swap_cols(pi, k);
        a.swap_cols(pj, k);
        w.swap_rows(pj, k);

        let pivot_inv = a.get(k, k).inv().expect("pivot is nonzero");
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let q = a.get(i, k).mul(&pivot_inv);
            debug_assert!(q.val() >= Val::zero());
            let neg_q = q.neg();
            a.row_add(i, k, &neg_q);
            u.col_add(k, i, &q);
        }
        for j in k + 1..n {
            if a.get(k, j).is_zero() {
                continue;
            }
            let q = a.get(k, j).mul(&pivot_inv);
            debug_assert!(q.val() >= Val::zero());
            let neg_q = q.neg();
            a.col_add(j, k, &neg_q);
            w.row_add(k, j, &q);
        }
    }

    // Pivoting on minimal valuations makes the diagonal valuations
    // non-decreasing already; the selection pass below is a no-op safety
    // net that keeps the output contract independent of that argument.
    let mut exps: Vec<Rational> = (0..n)
        .map(|i| {
            a.get(i, i)
                .val()
                .as_finite()
                .cloned()
                .expect("diagonal entries are nonzero")
        })
        .collect();
    for i in 0..n {
        let mut min = i;
        for j in i + 1..n {
            if exps[j] < exps[min] {
                min = j;
            }
        }
        if min != i {
            exps.swap(i, min);
            a.swap_rows(i, min);
            a.swap_cols(i, min);
            u.swap_cols(i, min);
            w.swap_rows(i, min);
        }
    }

    // Replace diag(d_i) by diag(θ^(m·e_i))·diag(unit_i), folding the units
    // into W.
    let mdenom = cfg.ramification() as i64;
    for i in 0..n {
        let scaled = &exps[i] * Rational::from_integer(BigInt::from(mdenom));
        let unit = a.get(i, i).mul(&ExtScalar::theta_pow(-int_from(&scaled), cfg));
        debug_assert_eq!(unit.val(), Val::zero());
        w.scale_row(i, &unit);
    }

    Ok(SnfResult { u, exponents: exps, w })
}

/// Canonical representative of `c + p^a·Z_(p)` with p-adic digits supported
/// in `[v_p(c), a)`: an element of `[0, p^a)`, and an integer whenever `c`
/// is p-integral.
fn canonical_residue(c: &Rational, a: i64, p: u64) -> Rational {
    if c.is_zero() {
        return Rational::zero();
    }
    let v = match val_p(c, &FieldConfig::base(p).expect("valid prime")) {
        Val::Finite(v) => int_from(&v),
        Val::Infinite => unreachable!(),
    };
    if v >= a {
        return Rational::zero();
    }
    // c = p^v · n/d with n, d coprime to p; reduce n·d^{-1} mod p^(a−v).
    let unit = c * rational_pow(p, -v);
    let modulus = BigInt::from(p).pow((a - v) as u32);
    let n = unit.numer().mod_floor(&modulus);
    let d = unit.denom().clone();
    let inv = mod_inverse(&d, &modulus);
    let digits = (n * inv).mod_floor(&modulus);
    Rational::from_integer(digits) * rational_pow(p, v)
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    let e = a.extended_gcd(modulus);
    debug_assert!(e.gcd.is_one(), "inverse exists only for units");
    e.x.mod_floor(modulus)
}

fn mod_u64(n: &BigInt, p: u64) -> u64 {
    u64::try_from(&n.mod_floor(&BigInt::from(p))).expect("residue fits in u64")
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn modinv_u64(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverse of zero residue");
    // Fermat: a^(p−2) mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut out = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            out = mulmod(out, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    out
}

/// Determinant nonzero test over `F_p` by in-place elimination.
fn residue_det_nonzero(a: &mut [u64], n: usize, p: u64) -> bool {
    for k in 0..n {
        let pivot = match (k..n).find(|&i| a[i * n + k] % p != 0) {
            Some(i) => i,
            None => return false,
        };
        if pivot != k {
            for j in 0..n {
                a.swap(pivot * n + j, k * n + j);
            }
        }
        let inv = modinv_u64(a[k * n + k], p);
        for i in k + 1..n {
            if a[i * n + k] % p == 0 {
                continue;
            }
            let factor = mulmod(a[i * n + k], inv, p);
            for j in k..n {
                let sub = mulmod(factor, a[k * n + j], p);
                a[i * n + j] = (a[i * n + j] + p - sub % p) % p;
            }
        }
    }
    true
}

/// Hermite normal form over `Z_(p)` (base field only): the unique
/// upper-triangular matrix obtained from `M` by right multiplication by a
/// unimodular matrix, with p-power diagonal `p^(a_i)` and the off-diagonal
/// entry in row `i` reduced to the canonical representative of its class
/// modulo `p^(a_i)` (an integer in `[0, p^(a_i))` for p-integral input).
pub fn hnf_dvr(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("Hermite normal form of a non-square matrix".into()));
    }
    if m.config().ramification() != 1 {
        return Err(Error::ConfigMismatch(
            "Hermite normal form is defined over the base field (m = 1)".into(),
        ));
    }
    let n = m.rows();
    let cfg = m.config();
    let p = cfg.prime();
    let mut a = m.clone();

    // Triangularize bottom-up with column operations.
    for i in (0..n).rev() {
        let mut best: Option<(Val, usize)> = None;
        for j in 0..=i {
            let e = a.get(i, j);
            if e.is_zero() {
                continue;
            }
            let v = e.val();
            if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
                best = Some((v, j));
            }
        }
        let (_, pj) = best.ok_or(Error::SingularMatrix)?;
        a.swap_cols(pj, i);
        let pivot_inv = a.get(i, i).inv().expect("pivot is nonzero");
        for j in 0..i {
            if a.get(i, j).is_zero() {
                continue;
            }
            let q = a.get(i, j).mul(&pivot_inv).neg();
            a.col_add(j, i, &q);
        }
    }

    // Normalize the diagonal to exact p-powers.
    let mut diag_exp = vec![0i64; n];
    for i in 0..n {
        let d = a.get(i, i).as_rational().expect("base field entry").clone();
        let v = int_from(val_p(&d, &cfg).as_finite().expect("nonzero diagonal"));
        diag_exp[i] = v;
        let unit_inv = ExtScalar::from_rational(rational_pow(p, v) / d, cfg);
        a.scale_col(i, &unit_inv);
    }

    // Reduce off-diagonal entries to canonical residues, bottom row up so
    // later operations never disturb finished entries.
    for i in (0..n).rev() {
        for j in i + 1..n {
            let c = a.get(i, j).as_rational().expect("base field entry").clone();
            let r = canonical_residue(&c, diag_exp[i], p);
            let q = (&c - &r) * rational_pow(p, -diag_exp[i]);
            if !q.is_zero() {
                let coef = ExtScalar::from_rational(-q, cfg);
                a.col_add(j, i, &coef);
            }
        }
    }

    Ok(a)
}
