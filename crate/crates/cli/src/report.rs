use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

pub const REPORT_SCHEMA: &str = "tksub.report/1";
pub const ERROR_SCHEMA: &str = "tksub.error/1";

/// One subcommand run.
#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    /// Generator and seed, or file name, plus the host's size.
    pub input: Value,
    pub parameters: Value,
    pub result: Value,
    pub budget_exhausted: bool,
    /// Milliseconds per operation; only present with `--timings`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> io::Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    s.push('\n');
    Ok(s)
}

pub fn write_to(sink: &str, text: &[u8]) -> io::Result<()> {
    if sink == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text)?;
        out.flush()
    } else {
        File::create(sink)?.write_all(text)
    }
}

/// Flattens nested objects to dotted keys; arrays of scalars are joined with
/// `;`, other arrays are indexed.
fn flatten(prefix: &str, value: &Value, out: &mut BTreeMap<String, String>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.insert(prefix.to_string(), joined.join(";"));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), scalar(other));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One CSV row per value, columns are the union of flattened keys.
pub fn csv_projection(rows: &[Value]) -> io::Result<Vec<u8>> {
    let flat: Vec<BTreeMap<String, String>> = rows
        .iter()
        .map(|r| {
            let mut m = BTreeMap::new();
            flatten("", r, &mut m);
            m
        })
        .collect();
    let columns: BTreeSet<&String> = flat.iter().flat_map(|m| m.keys()).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns)?;
    for m in &flat {
        w.write_record(columns.iter().map(|c| m.get(*c).map(String::as_str).unwrap_or("")))?;
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}
