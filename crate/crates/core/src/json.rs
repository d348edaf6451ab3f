//! Wire formats: strict JSON parsing and deterministic emission for every
//! operand kind the CLI handles.
//!
//! Rationals travel as strings `"num"`/`"num/den"` (canonical lowest
//! terms, positive denominator on output), infinity as `"inf"`. Matrix
//! entries are rational strings over the base field; over `k_m` an entry
//! may instead be an array of up to `m` coefficient strings. Points are
//! `{"basis", "weights", "p"}` with an optional `"m"`; polynomials are
//! `{"terms": [{"exp": [...], "coef": "a/b"}]}`.
//!
//! Emission is byte-deterministic: objects serialize with sorted keys and
//! every collection is emitted in a canonical order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::building::{BuildingPoint, RelPos};
use crate::compactification::{Polynomial, Stratum};
use crate::error::Error;
use crate::linalg::{Matrix, SnfResult};
use crate::scalars::{parse_rational, ExtScalar, FieldConfig, Rational, Val};
use crate::tree::{TreeBall, TreeVertex};

/// A CLI-level failure: schema violations exit with code 2, domain errors
/// raised by library operations with code 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireError {
    Parse(String),
    Domain(Error),
}

impl From<Error> for WireError {
    fn from(e: Error) -> Self {
        WireError::Domain(e)
    }
}

impl std::fmt::Display for WireError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WireError::Parse(msg) => write!(f, "parse: {}", msg),
            WireError::Domain(e) => write!(f, "{}", e),
        }
    }
}

pub type WireResult<T> = std::result::Result<T, WireError>;

fn parse_err(path: &str, msg: impl AsRef<str>) -> WireError {
    WireError::Parse(format!("{}: {}", path, msg.as_ref()))
}

/// Parses a raw byte stream as a JSON document, with line/column
/// diagnostics on syntax errors.
pub fn parse_document(raw: &str) -> WireResult<Value> {
    serde_json::from_str(raw).map_err(|e| {
        WireError::Parse(format!(
            "invalid JSON at line {}, column {}: {}",
            e.line(),
            e.column(),
            e
        ))
    })
}

pub fn as_object<'a>(v: &'a Value, path: &str) -> WireResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(path, "expected an object"))
}

pub fn as_array<'a>(v: &'a Value, path: &str) -> WireResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(path, "expected an array"))
}

pub fn as_str<'a>(v: &'a Value, path: &str) -> WireResult<&'a str> {
    v.as_str().ok_or_else(|| parse_err(path, "expected a string"))
}

pub fn get_field<'a>(obj: &'a Map<String, Value>, name: &str, path: &str) -> WireResult<&'a Value> {
    obj.get(name)
        .ok_or_else(|| parse_err(path, format!("missing field \"{}\"", name)))
}

fn as_u64(v: &Value, path: &str) -> WireResult<u64> {
    v.as_u64().ok_or_else(|| parse_err(path, "expected a non-negative integer"))
}

pub fn parse_rational_value(v: &Value, path: &str) -> WireResult<Rational> {
    let s = as_str(v, path)?;
    parse_rational(s).map_err(|_| parse_err(path, format!("not a rational: {:?}", s)))
}

pub fn parse_val_value(v: &Value, path: &str) -> WireResult<Val> {
    let s = as_str(v, path)?;
    s.parse::<Val>()
        .map_err(|_| parse_err(path, format!("not a rational or \"inf\": {:?}", s)))
}

/// A scalar operand: a rational string, an array of coefficient strings
/// for elements of `k_m`, or the full object form
/// `{"coeffs": [...], "p": int, "m": int}` (whose configuration must
/// match the ambient one).
pub fn parse_scalar_value(v: &Value, cfg: FieldConfig, path: &str) -> WireResult<ExtScalar> {
    match v {
        Value::String(_) => {
            let r = parse_rational_value(v, path)?;
            Ok(ExtScalar::from_rational(r, cfg))
        }
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .enumerate()
                .map(|(i, c)| parse_rational_value(c, &format!("{}[{}]", path, i)))
                .collect::<WireResult<Vec<_>>>()?;
            ExtScalar::from_coeffs(coeffs, cfg).map_err(|e| parse_err(path, e.to_string()))
        }
        Value::Object(obj) => {
            let own = resolve_config(Some(obj), Some(cfg.prime()), Some(cfg.ramification()), path)?;
            parse_scalar_value(get_field(obj, "coeffs", path)?, own, &format!("{}.coeffs", path))
        }
        _ => Err(parse_err(
            path,
            "expected a rational string, coefficient array, or scalar object",
        )),
    }
}

/// The standalone object form of a scalar: `{"coeffs", "p", "m"}`.
pub fn ext_scalar_value(e: &ExtScalar) -> Value {
    json!({
        "coeffs": e
            .coeffs()
            .iter()
            .map(|c| Value::String(rational_string(c)))
            .collect::<Vec<_>>(),
        "p": e.config().prime(),
        "m": e.config().ramification(),
    })
}

/// A matrix as a row-major array of entry values; all rows must have the
/// same positive length.
pub fn parse_matrix_value(v: &Value, cfg: FieldConfig, path: &str) -> WireResult<Matrix> {
    let rows = as_array(v, path)?;
    if rows.is_empty() {
        return Err(parse_err(path, "matrix must have at least one row"));
    }
    let mut data = Vec::new();
    let mut width = None;
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{}[{}]", path, i);
        let entries = as_array(row, &rpath)?;
        match width {
            None => width = Some(entries.len()),
            Some(w) if w != entries.len() => {
                return Err(parse_err(&rpath, "inconsistent row length"));
            }
            _ => {}
        }
        for (j, e) in entries.iter().enumerate() {
            data.push(parse_scalar_value(e, cfg, &format!("{}[{}]", rpath, j))?);
        }
    }
    let width = width.unwrap_or(0);
    if width == 0 {
        return Err(parse_err(path, "matrix rows must be non-empty"));
    }
    Matrix::new(rows.len(), width, data, cfg).map_err(WireError::Domain)
}

/// Resolves the field configuration for an operand: the object's own
/// `"p"`/`"m"` fields merged with the CLI-level flags, which must agree
/// when both are present.
pub fn resolve_config(
    obj: Option<&Map<String, Value>>,
    flag_p: Option<u64>,
    flag_m: Option<u32>,
    path: &str,
) -> WireResult<FieldConfig> {
    let own_p = match obj.and_then(|o| o.get("p")) {
        Some(v) => Some(as_u64(v, &format!("{}.p", path))?),
        None => None,
    };
    let own_m = match obj.and_then(|o| o.get("m")) {
        Some(v) => {
            let m = as_u64(v, &format!("{}.m", path))?;
            Some(u32::try_from(m).map_err(|_| parse_err(path, "m out of range"))?)
        }
        None => None,
    };
    if let (Some(a), Some(b)) = (own_p, flag_p) {
        if a != b {
            return Err(parse_err(
                path,
                format!("field \"p\" = {} conflicts with --prime {}", a, b),
            ));
        }
    }
    if let (Some(a), Some(b)) = (own_m, flag_m) {
        if a != b {
            return Err(parse_err(
                path,
                format!("field \"m\" = {} conflicts with --ram {}", a, b),
            ));
        }
    }
    let p = own_p
        .or(flag_p)
        .ok_or_else(|| parse_err(path, "prime not specified (use --prime or a \"p\" field)"))?;
    let m = own_m.or(flag_m).unwrap_or(1);
    FieldConfig::new(p, m).map_err(|e| parse_err(path, e.to_string()))
}

/// Parses a building point `{"basis", "weights", "p", "m"?}`.
pub fn parse_point(
    v: &Value,
    flag_p: Option<u64>,
    flag_m: Option<u32>,
    path: &str,
) -> WireResult<BuildingPoint> {
    let obj = as_object(v, path)?;
    let cfg = resolve_config(Some(obj), flag_p, flag_m, path)?;
    let basis = parse_matrix_value(
        get_field(obj, "basis", path)?,
        cfg,
        &format!("{}.basis", path),
    )?;
    let warr = as_array(get_field(obj, "weights", path)?, &format!("{}.weights", path))?;
    let weights = warr
        .iter()
        .enumerate()
        .map(|(i, w)| parse_val_value(w, &format!("{}.weights[{}]", path, i)))
        .collect::<WireResult<Vec<_>>>()?;
    BuildingPoint::new(basis, weights).map_err(WireError::Domain)
}

/// Parses a polynomial with the expected number of variables; exponent
/// rows must be distinct and coefficients nonzero.
pub fn parse_polynomial(v: &Value, nvars: usize, path: &str) -> WireResult<Polynomial> {
    let obj = as_object(v, path)?;
    let terms = as_array(get_field(obj, "terms", path)?, &format!("{}.terms", path))?;
    let mut out = Polynomial::zero(nvars);
    let mut seen = std::collections::BTreeSet::new();
    for (i, term) in terms.iter().enumerate() {
        let tpath = format!("{}.terms[{}]", path, i);
        let tobj = as_object(term, &tpath)?;
        let exp_arr = as_array(get_field(tobj, "exp", &tpath)?, &format!("{}.exp", tpath))?;
        if exp_arr.len() != nvars {
            return Err(parse_err(
                &tpath,
                format!("exponent of length {} in {} variables", exp_arr.len(), nvars),
            ));
        }
        let exp = exp_arr
            .iter()
            .enumerate()
            .map(|(j, e)| {
                let n = as_u64(e, &format!("{}.exp[{}]", tpath, j))?;
                u32::try_from(n).map_err(|_| parse_err(&tpath, "exponent out of range"))
            })
            .collect::<WireResult<Vec<_>>>()?;
        if !seen.insert(exp.clone()) {
            return Err(parse_err(&tpath, "duplicate multi-index"));
        }
        let coef = parse_rational_value(get_field(tobj, "coef", &tpath)?, &format!("{}.coef", tpath))?;
        if coef.is_zero() {
            return Err(parse_err(&tpath, "zero coefficient"));
        }
        out.add_term(exp, coef);
    }
    Ok(out)
}

/// Parses a 2x2 tree-vertex key (rational matrix) and canonicalizes it.
pub fn parse_vertex(v: &Value, cfg: FieldConfig, path: &str) -> WireResult<TreeVertex> {
    let m = parse_matrix_value(v, cfg, path)?;
    crate::tree::canonical_vertex(&m).map_err(WireError::Domain)
}

// ---- emission ----

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

pub fn val_string(v: &Val) -> String {
    v.to_string()
}

pub fn scalar_value(e: &ExtScalar) -> Value {
    match e.as_rational() {
        Some(r) if e.config().ramification() == 1 => Value::String(rational_string(r)),
        _ => Value::Array(
            e.coeffs()
                .iter()
                .map(|c| Value::String(rational_string(c)))
                .collect(),
        ),
    }
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array((0..m.cols()).map(|j| scalar_value(m.get(i, j))).collect())
            })
            .collect(),
    )
}

pub fn point_value(x: &BuildingPoint) -> Value {
    let mut obj = Map::new();
    obj.insert("basis".into(), matrix_value(x.basis()));
    obj.insert(
        "weights".into(),
        Value::Array(x.weights().iter().map(|w| Value::String(val_string(w))).collect()),
    );
    obj.insert("p".into(), json!(x.config().prime()));
    if x.config().ramification() != 1 {
        obj.insert("m".into(), json!(x.config().ramification()));
    }
    Value::Object(obj)
}

pub fn relpos_value(rp: &RelPos) -> Value {
    json!({
        "centered": rp.is_centered(),
        "deltas": rp.deltas().iter().map(rational_string).collect::<Vec<_>>(),
    })
}

pub fn snf_value(snf: &SnfResult) -> Value {
    json!({
        "U": matrix_value(&snf.u),
        "exponents": snf.exponents.iter().map(rational_string).collect::<Vec<_>>(),
        "W": matrix_value(&snf.w),
    })
}

pub fn stratum_value(s: &Stratum) -> Value {
    json!({
        "kernel": matrix_value(s.kernel()),
        "quotient": point_value(s.quotient_point()),
    })
}

pub fn poly_value(f: &Polynomial) -> Value {
    json!({
        "terms": f
            .terms()
            .map(|(exp, coef)| {
                json!({
                    "exp": exp.to_vec(),
                    "coef": rational_string(coef),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn vertex_value(v: &TreeVertex) -> Value {
    matrix_value(v.key())
}

pub fn ball_value(b: &TreeBall) -> Value {
    Value::Array(b.vertices.iter().map(vertex_value).collect())
}

/// Renders a rational as a decimal string with the given number of
/// fractional digits, rounding half away from zero.
pub fn decimal_string(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let num = r.numer() * &scale;
    let den = r.denom();
    // Truncated division plus a half-away-from-zero correction.
    let (mut q, rem) = num.div_rem(den);
    if rem.abs() * BigInt::from(2) >= *den {
        q += if num.is_negative() { BigInt::from(-1) } else { BigInt::from(1) };
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let q = q.abs();
    let (int_part, frac_part) = q.div_rem(&scale);
    format!(
        "{}{}.{:0>width$}",
        sign,
        int_part,
        frac_part.to_string(),
        width = digits as usize
    )
}
