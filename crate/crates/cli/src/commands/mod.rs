pub mod adhm;
pub mod bundles;
pub mod localize;
pub mod moduli;
pub mod nekrasov;
pub mod twistor;
pub mod verify;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::{Failure, RunConfig};

pub fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Io(e.to_string()))
}

fn floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))).collect()
}

/// `x1,x2,x3,x4`.
pub fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let v = floats(s)?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", v.len()))
}

/// Points separated by `;`.
pub fn parse_points(s: &str) -> Result<Vec<[f64; 4]>, String> {
    s.split(';').map(parse_point).collect()
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    floats(s)
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    match floats(s)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err("expected `re` or `re,im`".into()),
    }
}

/// Tolerance from the config file, else the default.
pub fn tolerance(cfg: &RunConfig, name: &str, default: f64) -> f64 {
    cfg.tolerances.get(name).copied().unwrap_or(default)
}

pub fn require_json(cfg: &RunConfig, command: &str) -> Result<(), Failure> {
    if cfg.format == crate::Format::Csv {
        return Err(Failure::usage(format!("{command} has no CSV output"), "CSV is available for `adhm density` and `twistor grid`"));
    }
    Ok(())
}
