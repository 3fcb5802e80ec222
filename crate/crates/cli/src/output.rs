//! Report envelopes and CSV writers.
//!
//! JSON goes to stdout; with fixed flags and seed the bytes are identical
//! across runs (timing is only included when explicitly requested).
//! Floating-point JSON payloads are decimal strings with 17 significant
//! digits; CSV values use the shortest round-trip decimal form.

use std::fs;
use std::io::Write;
use std::path::Path;

use bilimit_core::fubini::CurvePoint;
use num_complex::Complex64;
use serde::Serialize;

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct Envelope<C: Serialize, B: Serialize> {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub input: String,
    pub config: C,
    #[serde(flatten)]
    pub body: B,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

pub fn emit_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("JSON encoding failed: {e}")))?;
    println!("{text}");
    Ok(())
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    let mut f = fs::File::create(path)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

pub fn grid_csv(header: &str, rows: &[(Vec<f64>, Complex64)]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (coords, value) in rows {
        for c in coords {
            out.push_str(&format!("{c},"));
        }
        out.push_str(&format!("{},{}\n", value.re, value.im));
    }
    out
}

pub fn curve_csv(coord_name: &str, points: &[CurvePoint]) -> String {
    let mut out = format!("{coord_name},value_re,value_im,stabilized\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.coord, p.estimate.re, p.estimate.im, p.stabilized
        ));
    }
    out
}
