use std::io::Write;
use std::path::Path;

use gaugebench::verify::Check;
use serde::Serialize;
use serde_json::Value;

/// What every subcommand prints.
#[derive(Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        RunReport {
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs,
            results,
            checks: Vec::new(),
            passed: true,
            seconds: None,
        }
    }

    pub fn with_checks(mut self, checks: Vec<Check>) -> Self {
        self.passed = checks.iter().all(|c| c.passed);
        self.checks = checks;
        self
    }

    pub fn failed(mut self) -> Self {
        self.passed = false;
        self
    }
}

pub fn check_le(name: &str, value: f64, bound: f64) -> Check {
    Check { name: name.into(), passed: value <= bound, value: Some(value), tolerance: Some(format!("<= {bound:e}")), detail: None }
}

pub fn check_exact(name: &str, passed: bool, detail: Option<String>) -> Check {
    Check { name: name.into(), passed, value: None, tolerance: Some("exact".into()), detail }
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}
