//! Canonical JSON for complexes, matroids and reports.
//!
//! Rationals are written as `"p/q"` strings (integers as `"p"`), floats are
//! rounded to 12 significant digits, and object keys are sorted, so equal
//! inputs always serialize to identical bytes.

use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::complex::{Face, WeightedComplex};
use crate::error::{Error, Result};
use crate::matroid::{set_of, Matroid, MatroidKind};
use crate::rational::{parse_rational, ExtRational, Rational};

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn ser_face<S: Serializer>(f: &Face, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.vertices().serialize(s)
}

pub fn rational_value(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Rounds every float in `v` to 12 significant digits; `-0` becomes `0`.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap_or(0.0));
            let x = if x == 0.0 { 0.0 } else { x };
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Serializes `value` to a canonical JSON value.
pub fn to_value<T: Serialize>(value: &T) -> Result<Value> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    round_floats(&mut v);
    Ok(v)
}

/// Pretty-printed, newline-terminated canonical text.
pub fn to_canonical_string(v: &Value) -> String {
    let mut v = v.clone();
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn label_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() || n.is_i64() => Ok(n.to_string()),
        _ => Err(Error::Parse(format!("vertex label must be a string or integer, got {v}"))),
    }
}

fn rational_of(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or(0).into())),
        _ => Err(Error::Parse(format!("weight must be a \"p/q\" string, got {v}"))),
    }
}

/// Orders labels numerically when they all are integers, otherwise
/// lexicographically.
fn canonical_labels(mut labels: Vec<String>) -> Vec<String> {
    labels.sort();
    labels.dedup();
    if labels.iter().all(|l| l.parse::<u64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<u64>().unwrap_or(0));
    }
    labels
}

pub fn complex_from_value(v: &Value) -> Result<WeightedComplex> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("complex must be a JSON object".into()))?;
    let tops_v = obj
        .get("tops")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("complex needs a \"tops\" array".into()))?;
    let tops_labels = tops_v
        .iter()
        .map(|t| {
            t.as_array()
                .ok_or_else(|| Error::Parse("each top face must be an array".into()))?
                .iter()
                .map(label_of)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = match obj.get("vertices") {
        Some(Value::Array(vs)) => {
            let l = vs.iter().map(label_of).collect::<Result<Vec<_>>>()?;
            let mut sorted = l.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != l.len() {
                return Err(Error::Parse("duplicate vertex labels".into()));
            }
            l
        }
        Some(_) => return Err(Error::Parse("\"vertices\" must be an array".into())),
        None => canonical_labels(tops_labels.iter().flatten().cloned().collect()),
    };
    let index: std::collections::HashMap<&str, u32> =
        labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();
    let tops = tops_labels
        .iter()
        .map(|t| {
            let ids = t
                .iter()
                .map(|l| {
                    index
                        .get(l.as_str())
                        .copied()
                        .ok_or_else(|| Error::Parse(format!("vertex {l:?} is not listed")))
                })
                .collect::<Result<Vec<_>>>()?;
            Face::new(ids)
        })
        .collect::<Result<Vec<_>>>()?;
    let weights = match obj.get("weights") {
        None | Some(Value::Null) => None,
        Some(Value::Array(ws)) => Some(ws.iter().map(rational_of).collect::<Result<Vec<_>>>()?),
        Some(_) => return Err(Error::Parse("\"weights\" must be an array".into())),
    };
    WeightedComplex::with_labels(labels, &tops, weights.as_deref())
}

pub fn complex_to_value(x: &WeightedComplex) -> Value {
    let tops: Vec<Value> = x.faces(x.dim()).iter().map(|t| json!(x.label_face(t))).collect();
    let weights: Vec<Value> = x.top_distribution().iter().map(rational_value).collect();
    json!({
        "type": "complex",
        "dim": x.dim(),
        "vertices": x.labels(),
        "tops": tops,
        "weights": weights,
    })
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("matroid needs a non-negative integer \"{key}\"")))
}

fn usize_lists(v: Option<&Value>, key: &str) -> Result<Vec<Vec<usize>>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("matroid needs a \"{key}\" array")))?;
    arr.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse(format!("entries of \"{key}\" must be arrays")))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::Parse(format!("entries of \"{key}\" must be integers")))
                })
                .collect()
        })
        .collect()
}

pub fn matroid_from_value(v: &Value) -> Result<Matroid> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("matroid must be a JSON object".into()))?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("uniform") => Matroid::uniform(usize_field(obj, "n")?, usize_field(obj, "r")?),
        Some("graphic") => {
            let edges = usize_lists(obj.get("edges"), "edges")?
                .into_iter()
                .map(|e| match e[..] {
                    [a, b] => Ok((a, b)),
                    _ => Err(Error::Parse("graphic edges must be pairs".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            Matroid::graphic(usize_field(obj, "n_vertices")?, edges)
        }
        Some("linear_f2") => {
            let cols = usize_lists(obj.get("columns"), "columns")?
                .into_iter()
                .map(|c| c.into_iter().map(|b| b.min(2) as u8).collect())
                .collect::<Vec<Vec<u8>>>();
            Matroid::linear_f2(&cols)
        }
        Some("explicit") => Matroid::explicit(usize_field(obj, "ground")?, &usize_lists(obj.get("independent"), "independent")?),
        Some(k) => Err(Error::Parse(format!("unknown matroid kind {k:?}"))),
        None => Err(Error::Parse("matroid needs a \"kind\"".into())),
    }
}

pub fn matroid_to_value(m: &Matroid) -> Value {
    match m.kind() {
        MatroidKind::Uniform { n, r } => json!({"kind": "uniform", "n": n, "r": r}),
        MatroidKind::Graphic { n_vertices, edges } => {
            let e: Vec<[usize; 2]> = edges.iter().map(|&(a, b)| [a, b]).collect();
            json!({"kind": "graphic", "n_vertices": n_vertices, "edges": e})
        }
        MatroidKind::LinearF2 { rows, columns } => {
            let cols: Vec<Vec<u8>> = columns
                .iter()
                .map(|c| (0..*rows).map(|i| (c >> i & 1) as u8).collect())
                .collect();
            json!({"kind": "linear_f2", "columns": cols})
        }
        MatroidKind::Explicit { ground, independent } => {
            let sets: Vec<Vec<usize>> = independent.iter().map(|&s| set_of(s)).collect();
            json!({"kind": "explicit", "ground": ground, "independent": sets})
        }
    }
}

/// A parsed input file.
#[derive(Clone, Debug)]
pub enum Instance {
    Complex(WeightedComplex),
    Matroid(Matroid),
}

impl Instance {
    pub fn from_value(v: &Value) -> Result<Self> {
        if v.get("kind").is_some() {
            Ok(Instance::Matroid(matroid_from_value(v)?))
        } else {
            Ok(Instance::Complex(complex_from_value(v)?))
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn to_value(&self) -> Value {
        match self {
            Instance::Complex(x) => complex_to_value(x),
            Instance::Matroid(m) => matroid_to_value(m),
        }
    }
}
