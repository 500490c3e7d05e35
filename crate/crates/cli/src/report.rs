use std::fs;
use std::io::Write;
use std::path::Path;

use local_scores::verify::{CheckReport, Witness};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

pub enum Status {
    Ok,
    CheckFailed,
}

pub struct Outcome {
    pub status: Status,
    pub report: Value,
}

/// Wraps a command result with the tool identity, configuration and input digests.
pub fn envelope(command: &str, config: Value, inputs: Map<String, Value>, result: Value) -> Value {
    json!({
        "tool": "local-scores",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "inputs": inputs,
        "result": result,
    })
}

pub fn witness_json(w: &Witness) -> Value {
    json!({ "input": w.input, "observed": w.observed, "expected": w.expected })
}

pub fn check_json(check: &str, r: &CheckReport) -> Value {
    json!({
        "check": check,
        "name": r.name,
        "passed": r.passed,
        "max_violation": r.max_violation,
        "tolerance": r.tolerance,
        "witnesses": r.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
    })
}

pub fn write(report: &Value, output: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report).expect("JSON values serialize");
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            }),
    }
}
