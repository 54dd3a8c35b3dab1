//! Self-describing experiment reports with deterministic serialization.
//!
//! JSON is emitted by a small writer that keeps insertion order and prints
//! every float with 17 significant digits, enough to round-trip `f64`
//! exactly. Re-running an experiment with the same config reproduces the
//! serialized report byte for byte, except for the `timing` block.

use std::io::Write;

use crate::config::ExperimentConfig;
use crate::{HarnessError, Result, VERSION};

/// A JSON value with ordered object keys.
#[derive(Debug, Clone, PartialEq)]
pub enum JsonValue {
    Bool(bool),
    UInt(u64),
    Float(f64),
    Str(String),
    Array(Vec<JsonValue>),
    Object(Vec<(String, JsonValue)>),
}

impl From<bool> for JsonValue {
    fn from(v: bool) -> Self {
        JsonValue::Bool(v)
    }
}
impl From<u64> for JsonValue {
    fn from(v: u64) -> Self {
        JsonValue::UInt(v)
    }
}
impl From<usize> for JsonValue {
    fn from(v: usize) -> Self {
        JsonValue::UInt(v as u64)
    }
}
impl From<f64> for JsonValue {
    fn from(v: f64) -> Self {
        JsonValue::Float(v)
    }
}
impl From<&str> for JsonValue {
    fn from(v: &str) -> Self {
        JsonValue::Str(v.to_string())
    }
}
impl From<String> for JsonValue {
    fn from(v: String) -> Self {
        JsonValue::Str(v)
    }
}

fn write_json(out: &mut String, value: &JsonValue) {
    match value {
        JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        JsonValue::UInt(v) => out.push_str(&v.to_string()),
        JsonValue::Float(v) => {
            assert!(v.is_finite(), "reports never carry non-finite numbers");
            // 17 significant digits: exact f64 round trip.
            out.push_str(&format!("{v:.16e}"));
        }
        JsonValue::Str(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                    c => out.push(c),
                }
            }
            out.push('"');
        }
        JsonValue::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(out, item);
            }
            out.push(']');
        }
        JsonValue::Object(fields) => {
            out.push('{');
            for (i, (key, item)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(out, &JsonValue::Str(key.clone()));
                out.push(':');
                write_json(out, item);
            }
            out.push('}');
        }
    }
}

/// One measured row: ordered field names and values.
#[derive(Debug, Clone, Default)]
pub struct Row {
    fields: Vec<(String, JsonValue)>,
}

impl Row {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(mut self, key: &str, value: impl Into<JsonValue>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn keys(&self) -> Vec<&str> {
        self.fields.iter().map(|(k, _)| k.as_str()).collect()
    }

    pub fn get(&self, key: &str) -> Option<&JsonValue> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn to_json(&self) -> JsonValue {
        JsonValue::Object(self.fields.clone())
    }
}

/// One pass/fail check with a human-readable detail line.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// A complete experiment report.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
    pub wall_seconds: f64,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    fn config_echo(&self) -> JsonValue {
        let c = &self.config;
        let mut fields: Vec<(String, JsonValue)> = vec![
            ("experiment".into(), c.experiment.name().into()),
            ("generator".into(), c.generator.name().into()),
            ("n".into(), c.n.into()),
            ("m".into(), c.m.into()),
            ("t".into(), c.t.into()),
            ("trials".into(), c.trials.into()),
            ("seed".into(), c.seed.into()),
            ("adversary".into(), c.adversary.name().into()),
            (
                "format".into(),
                match c.format {
                    crate::OutputFormat::Json => "json".into(),
                    crate::OutputFormat::Csv => "csv".into(),
                },
            ),
        ];
        if let Some(th) = c.threshold {
            fields.push(("threshold".into(), th.into()));
        }
        JsonValue::Object(fields)
    }

    /// Serialize to JSON. The `timing` block is the only part that varies
    /// between identical runs; `include_timing = false` drops it for
    /// byte-level comparisons.
    pub fn to_json(&self, include_timing: bool) -> String {
        let mut top: Vec<(String, JsonValue)> = vec![
            ("config".into(), self.config_echo()),
            ("version".into(), VERSION.into()),
            (
                "rows".into(),
                JsonValue::Array(self.rows.iter().map(Row::to_json).collect()),
            ),
            (
                "verdicts".into(),
                JsonValue::Array(
                    self.verdicts
                        .iter()
                        .map(|v| {
                            JsonValue::Object(vec![
                                ("name".into(), v.name.as_str().into()),
                                ("pass".into(), v.pass.into()),
                                ("detail".into(), v.detail.as_str().into()),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "seed_provenance".into(),
                JsonValue::Object(vec![
                    ("base_seed".into(), self.config.seed.into()),
                    (
                        "derivation".into(),
                        "stream(i) = chacha8(splitmix64(base + (i+1) * 0x9e3779b97f4a7c15))".into(),
                    ),
                ]),
            ),
        ];
        if include_timing {
            top.push((
                "timing".into(),
                JsonValue::Object(vec![("wall_seconds".into(), self.wall_seconds.into())]),
            ));
        }
        let mut out = String::new();
        write_json(&mut out, &JsonValue::Object(top));
        out.push('\n');
        out
    }

    /// Rows-only CSV with a header line. Every row of an experiment shares
    /// one schema.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        let Some(first) = self.rows.first() else {
            return Ok(out);
        };
        let header = first.keys();
        for row in &self.rows {
            if row.keys() != header {
                return Err(HarnessError::Run(
                    "rows with mismatched schemas cannot be serialized to CSV".into(),
                ));
            }
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, (_, value)) in row.fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match value {
                    JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
                    JsonValue::UInt(v) => out.push_str(&v.to_string()),
                    JsonValue::Float(v) => out.push_str(&format!("{v:.16e}")),
                    JsonValue::Str(s) => {
                        if s.contains(',') || s.contains('"') {
                            out.push('"');
                            out.push_str(&s.replace('"', "\"\""));
                            out.push('"');
                        } else {
                            out.push_str(s);
                        }
                    }
                    other => {
                        return Err(HarnessError::Run(format!(
                            "CSV cells must be scalar, found {other:?}"
                        )))
                    }
                }
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// Render in the configured format and write to the configured
    /// destination (stdout when no path is set).
    pub fn write_out(&self) -> Result<()> {
        let bytes = match self.config.format {
            crate::OutputFormat::Json => self.to_json(true),
            crate::OutputFormat::Csv => self.to_csv()?,
        };
        match &self.config.out {
            None => {
                std::io::stdout().write_all(bytes.as_bytes())?;
                Ok(())
            }
            Some(path) => {
                std::fs::write(path, bytes.as_bytes())?;
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.25f64, 1.0 / 3.0, 6.25e-2, 1e-300, 0.1 + 0.2] {
            let mut s = String::new();
            write_json(&mut s, &JsonValue::Float(v));
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn strings_are_escaped() {
        let mut s = String::new();
        write_json(&mut s, &JsonValue::Str("a\"b\\c\nd".into()));
        assert_eq!(s, "\"a\\\"b\\\\c\\nd\"");
    }
}
