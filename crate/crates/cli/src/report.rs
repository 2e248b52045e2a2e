use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
const SIG_DIGITS: usize = 12;

/// Machine-readable record of one command invocation.
#[derive(Debug)]
pub struct RunReport {
    command: &'static str,
    argv: Vec<String>,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub residuals: Map<String, Value>,
    pub error: Option<Value>,
}

impl RunReport {
    pub fn new(command: &'static str) -> Self {
        RunReport {
            command,
            argv: std::env::args().skip(1).collect(),
            inputs: Map::new(),
            results: Map::new(),
            residuals: Map::new(),
            error: None,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.into(), to_value(v));
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(key.into(), to_value(v));
    }

    pub fn residual(&mut self, key: &str, value: f64, tolerance: f64) {
        self.residuals.insert(
            key.into(),
            json!({ "value": value, "tolerance": tolerance, "pass": value < tolerance }),
        );
    }

    pub fn all_residuals_pass(&self) -> bool {
        self.residuals.values().all(|r| r["pass"] == Value::Bool(true))
    }

    pub fn fail(&mut self, err: &CliError) {
        self.error = Some(json!({ "class": err.class_name(), "exit_code": err.code, "message": err.message }));
    }

    pub fn to_json(&self) -> Value {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "tool": { "name": "qmeasure", "version": env!("CARGO_PKG_VERSION") },
            "command": { "name": self.command, "argv": self.argv },
            "inputs": self.inputs,
            "results": self.results,
            "residuals": self.residuals,
            "status": if self.error.is_some() { "error" } else { "ok" },
            "timestamp": timestamp,
        });
        if let Some(e) = &self.error {
            v["error"] = e.clone();
        }
        round_numbers(&mut v);
        v
    }

    /// Writes the report to `out`, or to stdout.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes") + "\n";
        match out {
            Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

/// Rounds a float to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_numbers),
        Value::Object(o) => o.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// `--csv` if given, else the `--out` path with a .csv extension.
pub fn csv_path(csv: Option<&Path>, out: Option<&Path>) -> Option<PathBuf> {
    csv.map(Path::to_path_buf).or_else(|| out.map(|o| o.with_extension("csv")))
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::io(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::io(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
