use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cayley_core::io;
use cayley_core::{Backend, Matrix, Scalar};

/// Stable JSON schema: `{command, backend, input_digest, seed, result, residuals}`.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub backend: Backend,
    pub input_digest: Option<String>,
    pub seed: u64,
    pub result: Value,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, backend: Backend, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            backend,
            input_digest: None,
            seed,
            result: json!({}),
            residuals: BTreeMap::new(),
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn matrix<T: Scalar>(&mut self, label: &str, m: &Matrix<T>) {
        self.lines.push(format!("{label} ="));
        for row in m.rows() {
            let tokens: Vec<String> = row.iter().map(ToString::to_string).collect();
            self.lines.push(format!("  [{}]", tokens.join(", ")));
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            return serde_json::to_string_pretty(self).expect("report serializes");
        }
        let mut out = format!("command: {}\nbackend: {}\nseed: {}\n", self.command, self.backend, self.seed);
        if let Some(d) = &self.input_digest {
            out.push_str(&format!("input: sha256:{d}\n"));
        }
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        if !self.residuals.is_empty() {
            out.push_str("residuals:\n");
            for (k, v) in &self.residuals {
                out.push_str(&format!("  {k}: {v:.3e}\n"));
            }
        }
        out
    }
}

/// SHA-256 of the canonical text serialization.
pub fn digest<T: Scalar>(m: &Matrix<T>) -> String {
    hex::encode(Sha256::digest(io::write_text(m).as_bytes()))
}

pub fn scalar_json<T: Scalar>(v: &T) -> Value {
    match T::BACKEND {
        Backend::Float => json!(v.to_f64()),
        Backend::Rational => json!(v.to_string()),
    }
}
