//! Machine-readable run reports: single JSON document on stdout with all
//! numeric fields rendered to 12 significant digits so equal runs are
//! byte-identical; a short human summary goes to stderr.

use nckit::AlgebraElement;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

pub struct RunReport {
    command: String,
    inputs_digest: String,
    outputs: Map<String, Value>,
    verdicts: Vec<Verdict>,
    started: Instant,
}

struct Verdict {
    name: String,
    pass: bool,
    residual: f64,
    tolerance: f64,
}

/// 12 significant digits, deterministic.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-3..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.11e}", x)
    }
}

impl RunReport {
    pub fn new<P: AsRef<std::path::Path>>(command: &str, inputs: &[P]) -> Self {
        let mut hasher = Sha256::new();
        for p in inputs {
            if let Ok(bytes) = std::fs::read(p.as_ref()) {
                hasher.update(&bytes);
            }
        }
        RunReport {
            command: command.to_string(),
            inputs_digest: format!("{:x}", hasher.finalize()),
            outputs: Map::new(),
            verdicts: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn push_num(&mut self, key: &str, value: f64) {
        self.outputs.insert(key.to_string(), Value::String(fmt_sig(value)));
    }

    pub fn push_bool(&mut self, key: &str, value: bool) {
        self.outputs.insert(key.to_string(), Value::Bool(value));
    }

    pub fn push_str(&mut self, key: &str, value: &str) {
        self.outputs.insert(key.to_string(), Value::String(value.to_string()));
    }

    pub fn push_num_list(&mut self, key: &str, values: &[f64]) {
        let list: Vec<Value> = values.iter().map(|&v| Value::String(fmt_sig(v))).collect();
        self.outputs.insert(key.to_string(), Value::Array(list));
    }

    pub fn push_str_list(&mut self, key: &str, values: &[String]) {
        let list: Vec<Value> = values.iter().map(|v| Value::String(v.clone())).collect();
        self.outputs.insert(key.to_string(), Value::Array(list));
    }

    /// Pre-built JSON (numbers must already be formatted deterministically).
    pub fn push_raw(&mut self, key: &str, value: Value) {
        self.outputs.insert(key.to_string(), value);
    }

    /// Matrices in the shared schema, entries at 12 significant digits.
    pub fn push_element(&mut self, key: &str, el: &AlgebraElement) {
        let blocks: Vec<Value> = el
            .blocks()
            .iter()
            .map(|b| {
                let rows: Vec<Value> = (0..b.nrows())
                    .map(|i| {
                        let cols: Vec<Value> = (0..b.ncols())
                            .map(|j| {
                                json!([fmt_sig(b[(i, j)].re), fmt_sig(b[(i, j)].im)])
                            })
                            .collect();
                        Value::Array(cols)
                    })
                    .collect();
                Value::Array(rows)
            })
            .collect();
        self.outputs.insert(key.to_string(), Value::Array(blocks));
    }

    pub fn push_verdict(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            pass: residual <= tolerance,
            residual,
            tolerance,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn render(&self) -> String {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                json!({
                    "name": v.name,
                    "pass": v.pass,
                    "residual": fmt_sig(v.residual),
                    "tolerance": fmt_sig(v.tolerance),
                })
            })
            .collect();
        let doc = json!({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "outputs": self.outputs,
            "verdicts": verdicts,
            "wall_ms": self.started.elapsed().as_millis() as u64,
        });
        serde_json::to_string_pretty(&doc).unwrap()
    }

    pub fn summary(&self) -> String {
        let mut lines = vec![format!("{}:", self.command)];
        for v in &self.verdicts {
            lines.push(format!(
                "  {} {} (residual {} <= {})",
                if v.pass { "PASS" } else { "FAIL" },
                v.name,
                fmt_sig(v.residual),
                fmt_sig(v.tolerance),
            ));
        }
        if self.verdicts.is_empty() {
            lines.push("  ok".into());
        }
        lines.join("\n")
    }
}
