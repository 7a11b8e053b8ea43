//! Tabular reports written as CSV or JSON with provenance columns.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Hex SHA-256 of `bytes`.
pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Rows sharing the provenance and parameter columns of one command run.
pub struct Report {
    prefix: Map<String, Value>,
    rows: Vec<Map<String, Value>>,
}

impl Report {
    /// `params` must serialize to a JSON object. `inputs` are the digests of
    /// every file read, in the order they were read.
    pub fn new(
        command: &str,
        seed: Option<u64>,
        params: &impl Serialize,
        inputs: &[String],
    ) -> Self {
        let params = match serde_json::to_value(params).expect("parameters serialize") {
            Value::Object(m) => m,
            other => panic!("parameters must be an object, got {other}"),
        };
        let canonical = serde_json::json!({
            "command": command,
            "params": params,
            "seed": seed,
            "inputs": inputs,
        });
        let config_hash = digest(canonical.to_string().as_bytes())[..16].to_string();
        let mut prefix = Map::new();
        prefix.insert("tool".into(), "lbsparse".into());
        prefix.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        prefix.insert("command".into(), command.into());
        prefix.insert("seed".into(), seed.map_or(Value::Null, Value::from));
        prefix.insert("config_hash".into(), config_hash.into());
        for (k, v) in params {
            prefix.insert(k, v);
        }
        Report {
            prefix,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, fields: Vec<(&str, Value)>) {
        let mut row = self.prefix.clone();
        for (k, v) in fields {
            row.insert(k.to_string(), v);
        }
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                let rows: Vec<&Map<String, Value>> = self.rows.iter().collect();
                serde_json::to_writer_pretty(&mut *out, &rows)
                    .map_err(|e| CliError::Output(e.to_string()))?;
                writeln!(out).map_err(|e| CliError::Output(e.to_string()))
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                let header: Vec<&String> = match self.rows.first() {
                    Some(row) => row.keys().collect(),
                    None => self.prefix.keys().collect(),
                };
                let err = |e: csv::Error| CliError::Output(e.to_string());
                w.write_record(&header).map_err(err)?;
                for row in &self.rows {
                    w.write_record(row.values().map(cell)).map_err(err)?;
                }
                w.flush().map_err(|e| CliError::Output(e.to_string()))
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
