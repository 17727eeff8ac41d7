//! Command-line front end: argument parsing, subcommand execution and
//! JSON/CSV reporting.

pub mod args;
pub mod commands;
pub mod report;
pub mod sweep;

use std::ffi::OsString;

use clap::Parser;
use serde_json::Value;

use crate::args::Cli;
use crate::commands::{execute, output_of};
use crate::report::{csv_projection, to_pretty_json, write_to, ErrorBody, ErrorReport, ERROR_SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `args` (program name first), runs the subcommand and writes its
/// report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let output = output_of(&cli.command).clone();
    let json_sink = output.json.clone().unwrap_or_else(|| if output.csv.is_some() { String::new() } else { "-".into() });
    let name = command_name(&cli);
    match execute(&cli.command) {
        Ok(report) => {
            let written = (|| -> std::io::Result<()> {
                if !json_sink.is_empty() {
                    write_to(&json_sink, to_pretty_json(&report)?.as_bytes())?;
                }
                if let Some(sink) = &output.csv {
                    write_to(sink, &csv_projection(&csv_rows(&report.result))?)?;
                }
                Ok(())
            })();
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("tksub: cannot write report: {e}");
                    EXIT_FAILURE
                }
            }
        }
        Err(failure) => {
            let report = ErrorReport {
                schema: ERROR_SCHEMA,
                tool_version: env!("CARGO_PKG_VERSION"),
                command: name,
                error: ErrorBody { kind: failure.kind, message: failure.message.clone() },
            };
            let sink = if json_sink.is_empty() { "-".to_string() } else { json_sink };
            if let Ok(text) = to_pretty_json(&report) {
                let _ = write_to(&sink, text.as_bytes());
            }
            eprintln!("tksub: {}", failure.message);
            EXIT_FAILURE
        }
    }
}

/// Tabular results (sweep cells, preset entries) give one row per item;
/// anything else is a single row.
fn csv_rows(result: &Value) -> Vec<Value> {
    for key in ["cells", "entries"] {
        if let Some(items) = result.get(key).and_then(Value::as_array) {
            return items.clone();
        }
    }
    vec![result.clone()]
}

fn command_name(cli: &Cli) -> String {
    let debug = format!("{:?}", cli.command);
    let variant = debug.split('(').next().unwrap_or_default();
    let mut out = String::new();
    for (i, ch) in variant.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(ch.to_ascii_lowercase());
    }
    out
}
