//! JSON file formats for pencils, witnesses, upper-bound certificates and
//! ABPs. Every document carries `"format": 1`; scalars are strings in the
//! grammar of [`crate::scalar::text`].

use serde_json::{json, Map, Value};

use crate::abp::Abp;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::oracle::Known;
use crate::pencil::{LinearPencil, MatTuple, Pencil};
use crate::rank::{UpperBound, Witness};
use crate::scalar::{parse_cyclo, parse_rational, parse_scalar, CycloNumber, FieldScalar};

pub const FORMAT: u64 = 1;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn check_format(v: &Value) -> Result<()> {
    match v.get("format") {
        None => Ok(()),
        Some(f) if f.as_u64() == Some(FORMAT) => Ok(()),
        Some(f) => Err(perr(format!("unsupported format {f}"))),
    }
}

fn check_kind(v: &Value, kind: &str) -> Result<()> {
    match v.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => Ok(()),
        Some(k) => Err(perr(format!("expected a {kind} file, found {k}"))),
        None => Err(perr(format!("missing \"kind\": \"{kind}\""))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field \"{key}\"")))
}

fn usize_field(v: &Value, key: &str) -> Result<usize> {
    field(v, key)?.as_u64().map(|x| x as usize).ok_or_else(|| perr(format!("\"{key}\" must be a nonnegative integer")))
}

fn vars_field(v: &Value) -> Result<Vec<String>> {
    field(v, "vars")?
        .as_array()
        .ok_or_else(|| perr("\"vars\" must be an array"))?
        .iter()
        .map(|x| x.as_str().map(str::to_owned).ok_or_else(|| perr("variable names must be strings")))
        .collect()
}

fn scalar_text(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        _ => Err(perr(format!("expected a scalar string, found {v}"))),
    }
}

fn parse_matrix<T: Clone>(v: &Value, rows: usize, cols: usize, zero: &T, f: &dyn Fn(&str) -> Result<T>) -> Result<Mat<T>> {
    let arr = v.as_array().ok_or_else(|| perr("a matrix must be an array of rows"))?;
    if arr.len() != rows {
        return Err(perr(format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for r in arr {
        let r = r.as_array().ok_or_else(|| perr("a matrix row must be an array"))?;
        if r.len() != cols {
            return Err(perr(format!("expected {cols} columns, found {}", r.len())));
        }
        out.push(r.iter().map(|x| f(&scalar_text(x)?)).collect::<Result<Vec<T>>>()?);
    }
    if rows == 0 {
        return Ok(Mat::from_fn(0, cols, zero, |_, _| zero.clone()));
    }
    Mat::from_rows(out, zero)
}

fn matrix_json<T: Clone + std::fmt::Display>(m: &Mat<T>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

fn mats_by_var<T: Clone + std::fmt::Display>(vars: &[String], mats: &[Mat<T>]) -> Value {
    let mut m = Map::new();
    for (v, a) in vars.iter().zip(mats) {
        m.insert(v.clone(), matrix_json(a));
    }
    Value::Object(m)
}

fn mats_for_vars<T: Clone>(
    v: &Value,
    vars: &[String],
    rows: usize,
    zero: &T,
    f: &dyn Fn(&str) -> Result<T>,
) -> Result<Vec<Mat<T>>> {
    let obj = v.as_object().ok_or_else(|| perr("matrices must be an object keyed by variable"))?;
    if let Some(k) = obj.keys().find(|k| !vars.contains(k)) {
        return Err(perr(format!("matrix given for unknown variable {k}")));
    }
    vars.iter()
        .map(|x| match obj.get(x) {
            Some(m) => parse_matrix(m, rows, rows, zero, f),
            None => Err(perr(format!("no matrix for variable {x}"))),
        })
        .collect()
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// A pencil file, with the optional rank metadata written by `gen`.
#[derive(Clone, Debug)]
pub struct PencilFile {
    pub pencil: Pencil,
    pub known: Option<Known>,
}

pub fn parse_pencil(text: &str) -> Result<PencilFile> {
    let v = parse_json(text)?;
    check_format(&v)?;
    let s = usize_field(&v, "s")?;
    let vars = vars_field(&v)?;
    let z = crate::field::rat(0);
    let a0 = parse_matrix(field(&v, "A0")?, s, s, &z, &|x| parse_rational(x))?;
    let a = match v.get("A") {
        Some(a) => mats_for_vars(a, &vars, s, &z, &|x| parse_rational(x))?,
        None if vars.is_empty() => vec![],
        None => return Err(perr("missing field \"A\"")),
    };
    let known = match v.get("meta") {
        Some(m) => match (m.get("expected_rank").and_then(Value::as_u64), m.get("rank_at_most").and_then(Value::as_u64)) {
            (Some(r), _) => Some(Known::Exact(r as usize)),
            (None, Some(r)) => Some(Known::AtMost(r as usize)),
            _ => None,
        },
        None => None,
    };
    let pencil = Pencil::new(vars, a0, a).map_err(|e| perr(e.to_string()))?;
    Ok(PencilFile { pencil, known })
}

pub fn pencil_to_json(t: &Pencil, known: Option<Known>) -> String {
    let mut v = json!({
        "format": FORMAT,
        "s": t.size(),
        "vars": t.vars(),
        "A0": matrix_json(t.constant()),
        "A": mats_by_var(t.vars(), t.coeffs()),
    });
    match known {
        Some(Known::Exact(r)) => v["meta"] = json!({ "expected_rank": r }),
        Some(Known::AtMost(r)) => v["meta"] = json!({ "rank_at_most": r }),
        None => {}
    }
    to_text(&v)
}

pub fn witness_to_json(t: &Pencil, w: &Witness) -> String {
    to_text(&json!({
        "format": FORMAT,
        "kind": "witness",
        "s": t.size(),
        "n": t.nvars(),
        "r": w.r,
        "d": w.dim(),
        "cycloIndex": w.cyclo_index(),
        "vars": t.vars(),
        "matrices": mats_by_var(t.vars(), w.tuple.mats()),
    }))
}

/// Parses a witness for `t`; shape disagreements with the pencil are parse
/// errors.
pub fn parse_witness(text: &str, t: &Pencil) -> Result<Witness> {
    let v = parse_json(text)?;
    check_format(&v)?;
    check_kind(&v, "witness")?;
    let (r, d, n) = (usize_field(&v, "r")?, usize_field(&v, "d")?, usize_field(&v, "n")?);
    let idx = field(&v, "cycloIndex")?.as_u64().filter(|&x| x >= 1).ok_or_else(|| perr("bad cycloIndex"))?;
    let vars = vars_field(&v)?;
    if n != t.nvars() || vars != t.vars() {
        return Err(perr(format!("witness is for {n} variables {vars:?}, pencil has {:?}", t.vars())));
    }
    if usize_field(&v, "s")? != t.size() {
        return Err(perr("witness size differs from the pencil's"));
    }
    let z = FieldScalar::zero(idx);
    let mats = mats_for_vars(field(&v, "matrices")?, &vars, d, &z, &|x| parse_scalar(x, idx))?;
    Ok(Witness { r, tuple: MatTuple::new(d, mats, &z)? })
}

pub fn cert_to_json(t: &Pencil, c: &UpperBound) -> String {
    to_text(&json!({
        "format": FORMAT,
        "kind": "upper-bound",
        "s": t.size(),
        "n": t.nvars(),
        "r": c.r,
        "d": c.dim(),
        "cycloIndex": c.shift.zero_elem().index(),
        "point": [c.point.0, c.point.1],
        "vars": t.vars(),
        "shift": mats_by_var(t.vars(), c.shift.mats()),
        "pairs": c.pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        "digest": c.digest,
    }))
}

pub fn parse_cert(text: &str, t: &Pencil) -> Result<UpperBound> {
    let v = parse_json(text)?;
    check_format(&v)?;
    check_kind(&v, "upper-bound")?;
    let (r, d) = (usize_field(&v, "r")?, usize_field(&v, "d")?);
    let idx = field(&v, "cycloIndex")?.as_u64().filter(|&x| x >= 1).ok_or_else(|| perr("bad cycloIndex"))?;
    let vars = vars_field(&v)?;
    if vars != t.vars() || usize_field(&v, "s")? != t.size() {
        return Err(perr("certificate does not match the pencil"));
    }
    let pt = field(&v, "point")?.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr("\"point\" must be [y, w]"))?;
    let point = (
        pt[0].as_i64().ok_or_else(|| perr("bad point"))?,
        pt[1].as_i64().ok_or_else(|| perr("bad point"))?,
    );
    let z = CycloNumber::zero(idx);
    let mats = mats_for_vars(field(&v, "shift")?, &vars, d, &z, &|x| parse_cyclo(x, idx))?;
    let pairs = field(&v, "pairs")?
        .as_array()
        .ok_or_else(|| perr("\"pairs\" must be an array"))?
        .iter()
        .map(|p| {
            let a = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr("a pair is [i, j]"))?;
            let i = a[0].as_u64().filter(|&x| x >= 1).ok_or_else(|| perr("pair indices are 1-based"))?;
            let j = a[1].as_u64().filter(|&x| x >= 1).ok_or_else(|| perr("pair indices are 1-based"))?;
            Ok((i as usize - 1, j as usize - 1))
        })
        .collect::<Result<_>>()?;
    let digest = field(&v, "digest")?.as_str().ok_or_else(|| perr("\"digest\" must be a string"))?.to_owned();
    Ok(UpperBound { r, point, shift: MatTuple::new(d, mats, &z)?, pairs, digest })
}

fn affine_json<F: Field + std::fmt::Display>(c: &F, lin: &[F], vars: &[String]) -> Value {
    let mut coeffs = Map::new();
    for (v, x) in vars.iter().zip(lin) {
        if !x.is_zero() {
            coeffs.insert(v.clone(), Value::String(x.to_string()));
        }
    }
    json!({ "const": c.to_string(), "coeffs": coeffs })
}

pub fn abp_to_json<F: Field + std::fmt::Display>(f: &Abp<F>, cyclo_index: u64) -> String {
    let layers: Vec<Value> = f
        .layers()
        .iter()
        .map(|l| {
            Value::Array(
                (0..l.rows())
                    .map(|i| {
                        Value::Array(
                            (0..l.cols())
                                .map(|j| {
                                    let (c, lin) = l.entry(i, j);
                                    affine_json(&c, &lin, f.vars())
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    to_text(&json!({ "format": FORMAT, "cycloIndex": cyclo_index, "vars": f.vars(), "layers": layers }))
}

pub fn parse_abp(text: &str) -> Result<Abp<FieldScalar>> {
    let v = parse_json(text)?;
    check_format(&v)?;
    let vars = vars_field(&v)?;
    let idx = match v.get("cycloIndex") {
        None => 1,
        Some(x) => x.as_u64().filter(|&x| x >= 1).ok_or_else(|| perr("bad cycloIndex"))?,
    };
    let z = FieldScalar::zero(idx);
    let layers = field(&v, "layers")?.as_array().ok_or_else(|| perr("\"layers\" must be an array"))?;
    let mut out = Vec::with_capacity(layers.len());
    for (t, layer) in layers.iter().enumerate() {
        let rows = layer.as_array().ok_or_else(|| perr(format!("layer {} must be a matrix", t + 1)))?;
        let nr = rows.len();
        let nc = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
        let mut a0 = Mat::zeros(nr, nc, &z);
        let mut a = vec![Mat::zeros(nr, nc, &z); vars.len()];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == nc).ok_or_else(|| perr(format!("ragged layer {}", t + 1)))?;
            for (j, e) in row.iter().enumerate() {
                if let Some(c) = e.get("const") {
                    a0.set(i, j, parse_scalar(&scalar_text(c)?, idx)?);
                }
                if let Some(cs) = e.get("coeffs") {
                    let cs = cs.as_object().ok_or_else(|| perr("\"coeffs\" must be an object"))?;
                    for (name, c) in cs {
                        let k = vars.iter().position(|x| x == name).ok_or_else(|| perr(format!("unknown variable {name}")))?;
                        a[k].set(i, j, parse_scalar(&scalar_text(c)?, idx)?);
                    }
                }
            }
        }
        out.push(LinearPencil::new(vars.clone(), a0, a).map_err(|e| perr(e.to_string()))?);
    }
    Abp::new(vars, out).map_err(|e| perr(e.to_string()))
}
