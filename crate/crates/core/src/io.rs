//! Matrix file formats.
//!
//! Text: the first line holds `n`, followed by `n` lines of `n`
//! whitespace-separated numbers. Tokens may be decimals (`-0.5`, `1e-8`) or
//! fractions (`3/5`); a fraction anywhere selects the rational backend.
//! Blank lines and lines starting with `#` are ignored.
//!
//! JSON: `{"n": 2, "rows": [[...], [...]], "backend": "float" | "rational"}`.
//! Rational entries are written as strings (`"3/5"`) so they stay exact;
//! numbers are accepted on input for either backend.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Rational, Scalar};

/// A matrix whose backend is decided at parse time.
#[derive(Debug, Clone)]
pub enum AnyMatrix {
    Float(Matrix<f64>),
    Rational(Matrix<Rational>),
}

impl AnyMatrix {
    pub fn backend(&self) -> Backend {
        match self {
            AnyMatrix::Float(_) => Backend::Float,
            AnyMatrix::Rational(_) => Backend::Rational,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyMatrix::Float(m) => m.n(),
            AnyMatrix::Rational(m) => m.n(),
        }
    }

    pub fn to_float(&self) -> Matrix<f64> {
        match self {
            AnyMatrix::Float(m) => m.clone(),
            AnyMatrix::Rational(m) => m.to_f64(),
        }
    }

    /// Exact rational value; floats convert to their exact binary value.
    pub fn to_rational(&self) -> Result<Matrix<Rational>> {
        match self {
            AnyMatrix::Float(m) => {
                Matrix::from_f64_exact(m).ok_or_else(|| Error::Parse("non-finite entry".to_string()))
            }
            AnyMatrix::Rational(m) => Ok(m.clone()),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyMatrix::Float(m) => write_text(m),
            AnyMatrix::Rational(m) => write_text(m),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyMatrix::Float(m) => to_json(m),
            AnyMatrix::Rational(m) => to_json(m),
        }
    }
}

fn parse_rows<T: Scalar>(rows: &[Vec<String>]) -> Result<Matrix<T>> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|t| T::parse_token(t)).collect::<Result<Vec<T>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed)
}

fn build(rows: Vec<Vec<String>>, backend: Option<Backend>) -> Result<AnyMatrix> {
    let backend = backend.unwrap_or_else(|| {
        if rows.iter().flatten().any(|t| t.contains('/')) {
            Backend::Rational
        } else {
            Backend::Float
        }
    });
    Ok(match backend {
        Backend::Float => AnyMatrix::Float(parse_rows(&rows)?),
        Backend::Rational => AnyMatrix::Rational(parse_rows(&rows)?),
    })
}

/// Parses the text format. `backend = None` auto-selects.
pub fn parse_text(input: &str, backend: Option<Backend>) -> Result<AnyMatrix> {
    let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".to_string()))?;
    let n: usize = header.parse().map_err(|_| Error::Parse(format!("expected dimension, found {header:?}")))?;
    let rows: Vec<Vec<String>> =
        lines.map(|l| l.split_whitespace().map(str::to_string).collect()).collect();
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!("row {} has {} entries, expected {n}", i + 1, r.len())));
    }
    build(rows, backend)
}

/// Parses the JSON format. An explicit `backend` argument overrides the
/// document's own field.
pub fn parse_json(input: &str, backend: Option<Backend>) -> Result<AnyMatrix> {
    let doc: Value = serde_json::from_str(input).map_err(|e| Error::Parse(e.to_string()))?;
    from_json_value(&doc, backend)
}

pub fn from_json_value(doc: &Value, backend: Option<Backend>) -> Result<AnyMatrix> {
    let bad = |msg: &str| Error::Parse(msg.to_string());
    let rows = doc.get("rows").and_then(Value::as_array).ok_or_else(|| bad("missing \"rows\" array"))?;
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("each row must be an array"))?
                .iter()
                .map(|v| match v {
                    Value::Number(x) => Ok(x.to_string()),
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(bad("entries must be numbers or strings")),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    if let Some(n) = doc.get("n") {
        let n = n.as_u64().ok_or_else(|| bad("\"n\" must be a non-negative integer"))?;
        if n as usize != rows.len() {
            return Err(Error::Parse(format!("\"n\" is {n} but there are {} rows", rows.len())));
        }
    }
    let declared = match doc.get("backend") {
        None => None,
        Some(v) => Some(serde_json::from_value::<Backend>(v.clone()).map_err(|e| Error::Parse(e.to_string()))?),
    };
    build(rows, backend.or(declared))
}

/// Text is JSON when it starts with `{`, otherwise the text format.
pub fn parse_any(input: &str, backend: Option<Backend>) -> Result<AnyMatrix> {
    if input.trim_start().starts_with('{') {
        parse_json(input, backend)
    } else {
        parse_text(input, backend)
    }
}

/// Text format; floats use the shortest representation that parses back to
/// the same value.
pub fn write_text<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = format!("{}\n", m.n());
    for row in m.rows() {
        let tokens: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    let rows: Vec<Vec<Value>> = m
        .rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| match T::BACKEND {
                    Backend::Float => json!(v.to_f64()),
                    Backend::Rational => json!(v.to_string()),
                })
                .collect()
        })
        .collect();
    json!({ "n": m.n(), "rows": rows, "backend": T::BACKEND })
}
