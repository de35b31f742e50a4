//! JSON input and output formats used by the command line tool.
//!
//! * multivector: `{"n": 2, "coeffs": [[re, im], ...]}` in bitmask order;
//! * polynomial: `{"n": 2, "terms": [{"exp": [0, 1, 1], "coeff": {"blade": 0, "re": 1.0, "im": 0.0}}]}`,
//!   exponents over `x_0..x_n` (or `z_1..z_n` for scalar inputs);
//! * points: an array of points, each an array of numbers or `[re, im]` pairs;
//! * matrix tuple: `{"n": 2, "d": 2, "matrices": [[[a, b], [c, d]], ...]}`
//!   with entries as numbers or `[re, im]` pairs;
//! * decomposition: `{"n": 2, "max_degree": 4, "entries": [{"m": 2, "k": 2, "terms": [...]}]}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::clifford::{Multivector, Paravector};
use crate::error::{MonolieError, Result};
use crate::lie::LieDecomposition;
use crate::monogenic::PolyMultivector;
use crate::opcalc::{CMatrix, MatrixTuple};
use crate::poly::Poly;

fn invalid(msg: impl Into<String>) -> MonolieError {
    MonolieError::InvalidArgument(msg.into())
}

/// A number or a `[re, im]` pair.
pub fn complex_from_value(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(x) => Ok(Complex64::new(
            x.as_f64().ok_or_else(|| invalid("non-finite number"))?,
            0.0,
        )),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| invalid("real part must be a number"))?;
            let im = pair[1].as_f64().ok_or_else(|| invalid("imaginary part must be a number"))?;
            Ok(Complex64::new(re, im))
        }
        other => Err(invalid(format!("expected a number or [re, im], found {other}"))),
    }
}

fn complex_to_value(c: Complex64) -> Value {
    serde_json::json!([c.re, c.im])
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| invalid(format!("JSON: {e}")))
}

#[derive(Serialize, Deserialize)]
struct MultivectorJson {
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

pub fn multivector_from_json(text: &str) -> Result<Multivector> {
    let raw: MultivectorJson = parse(text)?;
    Multivector::from_coeffs(
        raw.n,
        raw.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
    )
}

pub fn multivector_to_json(u: &Multivector) -> String {
    let raw = MultivectorJson {
        n: u.n(),
        coeffs: u.coeffs().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string(&raw).expect("plain data serializes")
}

#[derive(Serialize, Deserialize, Clone)]
struct CoeffJson {
    #[serde(default)]
    blade: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize, Clone)]
struct TermJson {
    exp: Vec<u32>,
    coeff: CoeffJson,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    terms: Vec<TermJson>,
}

/// Multivector-valued polynomial in `x_0..x_n`.
pub fn poly_multivector_from_json(text: &str) -> Result<PolyMultivector> {
    let raw: PolyJson = parse(text)?;
    let n = raw.n;
    let mut out = PolyMultivector::zero(n);
    let width = 1usize << n;
    for t in raw.terms {
        let exp = match t.exp.len() {
            len if len == n + 1 => t.exp,
            len if len == n => {
                let mut e = vec![0];
                e.extend(t.exp);
                e
            }
            len => {
                return Err(invalid(format!(
                    "exponent of length {len} for n = {n} (expected {} or {n})",
                    n + 1
                )))
            }
        };
        if t.coeff.blade >= width {
            return Err(invalid(format!("blade {} out of range for n = {n}", t.coeff.blade)));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); width];
        coeffs[t.coeff.blade] = Complex64::new(t.coeff.re, t.coeff.im);
        out.add_term(exp, Multivector::from_coeffs(n, coeffs)?);
    }
    Ok(out)
}

/// Scalar polynomial in `z_1..z_n`: every term must sit on blade 0 and,
/// when written over `x_0..x_n`, must not involve `x_0`.
pub fn scalar_poly_from_json(text: &str) -> Result<Poly> {
    let p = poly_multivector_from_json(text)?;
    if p.depends_on_x0() {
        return Err(invalid("scalar input polynomial must not involve x_0"));
    }
    let n = p.n();
    let mut out = Poly::zero(n);
    for (e, u) in p.terms() {
        if u.coeffs().iter().skip(1).any(|c| c.norm() != 0.0) {
            return Err(invalid("scalar input polynomial must only use blade 0"));
        }
        out.add_term(e[1..].to_vec(), u.coeff(0));
    }
    Ok(out)
}

pub fn poly_multivector_to_json(p: &PolyMultivector) -> String {
    let mut terms = Vec::new();
    for (e, u) in p.terms() {
        for (blade, c) in u.coeffs().iter().enumerate() {
            if c.norm() != 0.0 {
                terms.push(TermJson {
                    exp: e.clone(),
                    coeff: CoeffJson {
                        blade,
                        re: c.re,
                        im: c.im,
                    },
                });
            }
        }
    }
    serde_json::to_string(&PolyJson { n: p.n(), terms }).expect("plain data serializes")
}

/// Array of points with complex components.
pub fn points_from_json(text: &str) -> Result<Vec<Vec<Complex64>>> {
    let v: Value = parse(text)?;
    let arr = v.as_array().ok_or_else(|| invalid("points file must hold an array"))?;
    arr.iter()
        .map(|p| {
            p.as_array()
                .ok_or_else(|| invalid("each point must be an array"))?
                .iter()
                .map(complex_from_value)
                .collect()
        })
        .collect()
}

pub fn paravectors_from_json(text: &str) -> Result<Vec<Paravector>> {
    points_from_json(text)?.into_iter().map(Paravector::new).collect()
}

#[derive(Deserialize)]
struct TupleJson {
    n: usize,
    d: usize,
    matrices: Vec<Value>,
}

pub fn tuple_from_json(text: &str) -> Result<MatrixTuple> {
    let raw: TupleJson = parse(text)?;
    if raw.matrices.len() != raw.n {
        return Err(MonolieError::DimensionMismatch {
            left: raw.matrices.len(),
            right: raw.n,
        });
    }
    let d = raw.d;
    let mats = raw
        .matrices
        .iter()
        .map(|m| {
            let rows = m.as_array().ok_or_else(|| invalid("matrix must be an array of rows"))?;
            if rows.len() != d {
                return Err(MonolieError::DimensionMismatch {
                    left: rows.len(),
                    right: d,
                });
            }
            let mut out = CMatrix::zeros(d, d);
            for (i, row) in rows.iter().enumerate() {
                let row = row.as_array().ok_or_else(|| invalid("matrix row must be an array"))?;
                if row.len() != d {
                    return Err(MonolieError::DimensionMismatch {
                        left: row.len(),
                        right: d,
                    });
                }
                for (j, v) in row.iter().enumerate() {
                    out[(i, j)] = complex_from_value(v)?;
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(mats)
}

pub fn matrix_to_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_to_value(m[(i, j)])).collect()))
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
struct ScalarTermJson {
    exp: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    m: u32,
    k: u32,
    terms: Vec<ScalarTermJson>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    n: usize,
    max_degree: u32,
    entries: Vec<EntryJson>,
}

pub fn decomposition_to_json(dec: &LieDecomposition) -> String {
    let entries = dec
        .entries
        .iter()
        .map(|(&(m, k), p)| EntryJson {
            m,
            k,
            terms: p
                .terms()
                .iter()
                .map(|(e, c)| ScalarTermJson {
                    exp: e.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&DecompositionJson {
        n: dec.n,
        max_degree: dec.max_degree,
        entries,
    })
    .expect("plain data serializes")
}

pub fn decomposition_from_json(text: &str) -> Result<LieDecomposition> {
    let raw: DecompositionJson = parse(text)?;
    let mut dec = LieDecomposition::new(raw.n, raw.max_degree);
    let mut seen = BTreeMap::new();
    for e in raw.entries {
        let mut p = Poly::zero(raw.n);
        for t in e.terms {
            if t.exp.len() != raw.n {
                return Err(MonolieError::DimensionMismatch {
                    left: t.exp.len(),
                    right: raw.n,
                });
            }
            p.add_term(t.exp, Complex64::new(t.re, t.im));
        }
        if seen.insert((e.m, e.k), ()).is_some() {
            return Err(invalid(format!("duplicate entry ({}, {})", e.m, e.k)));
        }
        dec.insert(e.m, e.k, p)?;
    }
    Ok(dec)
}

/// A float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `re,im` CSV fields.
pub fn fmt_complex(c: Complex64) -> String {
    format!("{},{}", fmt_f64(c.re), fmt_f64(c.im))
}
