//! Exact scalar arithmetic: arbitrary-precision rationals with the p-adic
//! valuation, and the totally ramified extensions `k_m = Q[θ]/(θ^m − p)`.
//!
//! # Conventions
//!
//! Everything in this crate is *additive*:
//!
//! * the valuation is normalized by `v(p) = 1`, so `v` takes values in
//!   `(1/m)Z ∪ {+∞}` over `k_m`;
//! * the multiplicative picture `‖x‖ = max_i exp(c_i)·|λ_i|` corresponds to
//!   the additive picture `A(x) = min_i (v(λ_i) + w_i)` under the fixed
//!   dictionary `|t| = p^(−v(t))` and `c_i = −w_i·log p`;
//! * in particular every inequality `log|·| ≤ c_j − c_i` of the
//!   multiplicative world becomes `v(·) ≥ w_j − w_i` here, and the weight
//!   translation under a diagonal action is `w_i ↦ w_i − v(λ_i)`;
//! * `+∞` is a first-class value ([`Val::Infinite`]) with saturating
//!   addition, comparing strictly above every finite value.
//!
//! The extension element `θ` plays the role of `p^(1/m)`: `θ^m = p` and
//! `v(θ) = 1/m`. `X^m − p` is irreducible over `Q` (Eisenstein), so `k_m`
//! is a field and inverses exist for every nonzero element.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision rational number.
pub type Rational = BigRational;

/// The prime `p` and ramification index `m` fixing the value group `(1/m)Z`.
///
/// `m = 1` is the base field; `m > 1` selects `k_m = Q[θ]/(θ^m − p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldConfig {
    p: u64,
    m: u32,
}

impl FieldConfig {
    /// Creates a configuration, checking that `p` is prime and `m ≥ 1`.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidInput("ramification index must be >= 1".into()));
        }
        Ok(FieldConfig { p, m })
    }

    /// Base-field configuration (`m = 1`).
    pub fn base(p: u64) -> Result<Self> {
        FieldConfig::new(p, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn ramification(&self) -> u32 {
        self.m
    }

    /// Same prime, different ramification index.
    pub fn with_ramification(&self, m: u32) -> Result<Self> {
        FieldConfig::new(self.p, m)
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "Q(p={})", self.p)
        } else {
            write!(f, "Q(p={})[θ]/(θ^{} − p)", self.p, self.m)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// A valuation value: an exact rational or `+∞`.
///
/// `+∞` is maximal in the ordering and absorbing under addition.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Val {
    Finite(Rational),
    Infinite,
}

impl fmt::Debug for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Val {
    pub fn zero() -> Self {
        Val::Finite(Rational::zero())
    }

    pub fn finite(r: Rational) -> Self {
        Val::Finite(r)
    }

    pub fn from_integer(n: i64) -> Self {
        Val::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Val::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Val::Finite(r) => Some(r),
            Val::Infinite => None,
        }
    }

    /// Saturating addition: `∞ + x = ∞`.
    pub fn plus(&self, other: &Val) -> Val {
        match (self, other) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinite,
        }
    }

    /// Minimum of an iterator; empty input yields `∞`.
    pub fn min_of<I: IntoIterator<Item = Val>>(iter: I) -> Val {
        iter.into_iter().min().unwrap_or(Val::Infinite)
    }
}

impl PartialOrd for Val {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Val {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Val::Finite(a), Val::Finite(b)) => a.cmp(b),
            (Val::Finite(_), Val::Infinite) => Ordering::Less,
            (Val::Infinite, Val::Finite(_)) => Ordering::Greater,
            (Val::Infinite, Val::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(r) => write!(f, "{}", r),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Val {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            Ok(Val::Infinite)
        } else {
            Ok(Val::Finite(parse_rational(s)?))
        }
    }
}

/// Parses a rational from the wire format `"num"` or `"num/den"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("not a rational: {:?}", s));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// v_p of a nonzero integer: the exact power of `p` dividing `n`.
fn int_val(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// The p-adic valuation of a rational, normalized by `v(p) = 1`.
///
/// Total: `v(0) = +∞`. Satisfies `v(xy) = v(x) + v(y)` and
/// `v(x + y) ≥ min(v(x), v(y))` exactly.
pub fn val_p(x: &Rational, cfg: &FieldConfig) -> Val {
    if x.is_zero() {
        return Val::Infinite;
    }
    let v = int_val(x.numer(), cfg.p) - int_val(x.denom(), cfg.p);
    Val::from_integer(v)
}

/// `p^e` as an exact rational, `e` of either sign.
pub fn rational_pow(p: u64, e: i64) -> Rational {
    let b = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(b)
    } else {
        Rational::new(BigInt::one(), b)
    }
}

/// An element of `k_m = Q[θ]/(θ^m − p)`, stored as the coefficient vector
/// `(a_0, …, a_{m−1})` of `Σ a_i θ^i`.
///
/// The representation is canonical (degree `< m`), so structural equality
/// is field equality. The valuation of a nonzero element is
/// `min_i (v_p(a_i) + i/m)`; the candidates have pairwise distinct
/// fractional parts, so the minimum is attained by a unique index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtScalar {
    coeffs: Vec<Rational>,
    cfg: FieldConfig,
}

impl ExtScalar {
    pub fn zero(cfg: FieldConfig) -> Self {
        ExtScalar {
            coeffs: vec![Rational::zero(); cfg.m as usize],
            cfg,
        }
    }

    pub fn one(cfg: FieldConfig) -> Self {
        Self::from_rational(Rational::one(), cfg)
    }

    pub fn from_rational(r: Rational, cfg: FieldConfig) -> Self {
        let mut coeffs = vec![Rational::zero(); cfg.m as usize];
        coeffs[0] = r;
        ExtScalar { coeffs, cfg }
    }

    pub fn from_integer(n: i64, cfg: FieldConfig) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)), cfg)
    }

    /// Builds an element from up to `m` coefficients (missing ones are zero).
    pub fn from_coeffs(coeffs: Vec<Rational>, cfg: FieldConfig) -> Result<Self> {
        if coeffs.len() > cfg.m as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for ramification index {}",
                coeffs.len(),
                cfg.m
            )));
        }
        let mut c = coeffs;
        c.resize(cfg.m as usize, Rational::zero());
        Ok(ExtScalar { coeffs: c, cfg })
    }

    /// The uniformizer: `θ` for `m > 1`, `p` itself for `m = 1`.
    pub fn theta(cfg: FieldConfig) -> Self {
        Self::theta_pow(1, cfg)
    }

    /// `θ^k` for any integer `k` (negative powers use `θ^{−1} = θ^{m−1}/p`).
    pub fn theta_pow(k: i64, cfg: FieldConfig) -> Self {
        let m = cfg.m as i64;
        let q = k.div_euclid(m);
        let r = k.rem_euclid(m) as usize;
        let mut coeffs = vec![Rational::zero(); cfg.m as usize];
        coeffs[r] = rational_pow(cfg.p, q);
        ExtScalar { coeffs, cfg }
    }

    pub fn config(&self) -> FieldConfig {
        self.cfg
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The underlying rational if this element lies in the base field.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_cfg(&self, other: &ExtScalar) {
        assert_eq!(
            self.cfg, other.cfg,
            "scalar arithmetic requires matching field configurations"
        );
    }

    pub fn add(&self, other: &ExtScalar) -> ExtScalar {
        self.check_cfg(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        ExtScalar { coeffs, cfg: self.cfg }
    }

    pub fn sub(&self, other: &ExtScalar) -> ExtScalar {
        self.check_cfg(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        ExtScalar { coeffs, cfg: self.cfg }
    }

    pub fn neg(&self) -> ExtScalar {
        ExtScalar {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
            cfg: self.cfg,
        }
    }

    /// Product, reduced through `θ^m = p`.
    pub fn mul(&self, other: &ExtScalar) -> ExtScalar {
        self.check_cfg(other);
        let m = self.cfg.m as usize;
        let mut prod = vec![Rational::zero(); 2 * m - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        let p = Rational::from_integer(BigInt::from(self.cfg.p));
        for i in (m..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[i], Rational::zero());
            if !c.is_zero() {
                prod[i - m] += c * &p;
            }
        }
        prod.truncate(m);
        ExtScalar { coeffs: prod, cfg: self.cfg }
    }

    /// Multiplicative inverse, by extended gcd against `X^m − p`.
    pub fn inv(&self) -> Result<ExtScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(ExtScalar::from_rational(r.recip(), self.cfg));
        }
        let m = self.cfg.m as usize;
        // modulus f = X^m − p
        let mut f = vec![Rational::zero(); m + 1];
        f[0] = -Rational::from_integer(BigInt::from(self.cfg.p));
        f[m] = Rational::one();
        let (g, s) = poly_half_xgcd(&self.coeffs, &f);
        // g is a nonzero constant (f is irreducible), so a^{-1} = s / g.
        debug_assert_eq!(poly_degree(&g), Some(0));
        let ginv = g[0].recip();
        let mut coeffs: Vec<Rational> = s.iter().map(|c| c * &ginv).collect();
        coeffs.resize(m, Rational::zero());
        Ok(ExtScalar { coeffs, cfg: self.cfg })
    }

    pub fn div(&self, other: &ExtScalar) -> Result<ExtScalar> {
        Ok(self.mul(&other.inv()?))
    }

    /// The valuation `min_i (v_p(a_i) + i/m)`, in `(1/m)Z ∪ {+∞}`.
    ///
    /// Multiplicative: `val(ab) = val(a) + val(b)` exactly.
    pub fn val(&self) -> Val {
        let m = self.cfg.m as i64;
        Val::min_of(self.coeffs.iter().enumerate().map(|(i, a)| {
            val_p(a, &self.cfg).plus(&Val::Finite(Rational::new(
                BigInt::from(i as i64),
                BigInt::from(m),
            )))
        }))
    }

    /// Embeds into `k_M` for `m | M`, via `θ_m = θ_M^(M/m)`.
    pub fn lift(&self, target: FieldConfig) -> Result<ExtScalar> {
        if target.p != self.cfg.p || target.m % self.cfg.m != 0 {
            return Err(Error::ConfigMismatch(format!(
                "cannot embed {} into {}",
                self.cfg, target
            )));
        }
        let step = (target.m / self.cfg.m) as usize;
        let mut coeffs = vec![Rational::zero(); target.m as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = a.clone();
        }
        Ok(ExtScalar { coeffs, cfg: target })
    }
}

impl fmt::Debug for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "({})θ", a)?,
                _ => write!(f, "({})θ^{}", a, i)?,
            }
        }
        Ok(())
    }
}

fn poly_degree(a: &[Rational]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

fn poly_rem(mut a: Vec<Rational>, b: &[Rational]) -> Vec<Rational> {
    let db = poly_degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    while let Some(da) = poly_degree(&a) {
        if da < db {
            break;
        }
        let q = &a[da] / &lead;
        for i in 0..=db {
            let t = &b[i] * &q;
            a[da - db + i] -= t;
        }
    }
    a
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (da, db) = match (poly_degree(a), poly_degree(b)) {
        (Some(da), Some(db)) => (da, db),
        _ => return vec![Rational::zero()],
    };
    let mut out = vec![Rational::zero(); da + db + 1];
    for i in 0..=da {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=db {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

fn poly_quot(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let db = poly_degree(b).expect("division by zero polynomial");
    let da = match poly_degree(a) {
        Some(d) if d >= db => d,
        _ => return vec![Rational::zero()],
    };
    let lead = b[db].clone();
    let mut rem: Vec<Rational> = a.to_vec();
    let mut quot = vec![Rational::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let q = &rem[k + db] / &lead;
        if !q.is_zero() {
            for i in 0..=db {
                let t = &b[i] * &q;
                rem[k + i] -= t;
            }
        }
        quot[k] = q;
    }
    quot
}

/// Extended gcd returning `(g, s)` with `s·a ≡ g (mod f)`, `g = gcd(a, f)`.
fn poly_half_xgcd(a: &[Rational], f: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0: Vec<Rational> = a.to_vec();
    let mut r1: Vec<Rational> = f.to_vec();
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    while poly_degree(&r1).is_some() {
        let q = poly_quot(&r0, &r1);
        let r2 = poly_rem(r0.clone(), &r1);
        let s2 = {
            let qs = poly_mul(&q, &s1);
            let mut out = s0.clone();
            out.resize(out.len().max(qs.len()), Rational::zero());
            for (i, c) in qs.iter().enumerate() {
                out[i] -= c;
            }
            out
        };
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}
