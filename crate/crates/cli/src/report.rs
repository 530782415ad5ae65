//! Report envelopes.
//!
//! JSON reports are pretty-printed objects whose first field is the
//! timestamp, so it sits alone on the second line and everything else is
//! byte-for-byte reproducible. CSV output carries the same data as `#`
//! comment lines above the column header.

use std::fs;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::Failure;

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// `{"generated_unix", "tool", "command", "config", "report"}` with keys in
/// that order.
pub fn envelope(command: &str, config: Value, report: impl Serialize) -> Result<String, Failure> {
    let report =
        serde_json::to_value(report).map_err(|e| Failure::numerical(format!("cannot serialize report: {e}")))?;
    // serde_json sorts object keys, so the order is fixed by writing the
    // outer object by hand.
    let fields = [
        ("generated_unix", json!(now())),
        ("tool", json!(concat!("mu-corona ", env!("CARGO_PKG_VERSION")))),
        ("command", json!(command)),
        ("config", config),
        ("report", report),
    ];
    let mut out = String::from("{\n");
    for (i, (key, value)) in fields.iter().enumerate() {
        let body = serde_json::to_string_pretty(value).expect("values serialize");
        let body = body.replace('\n', "\n  ");
        let sep = if i + 1 < fields.len() { "," } else { "" };
        out.push_str(&format!("  \"{key}\": {body}{sep}\n"));
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn csv_header(command: &str, provenance: &[(&str, String)], columns: &[&str]) -> String {
    let mut out =
        format!("# generated_unix={}\n# tool=mu-corona {}\n# command={command}\n", now(), env!("CARGO_PKG_VERSION"));
    for (k, v) in provenance {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    out
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&str>) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("cannot write {p}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::input(format!("cannot write to stdout: {e}")))
        }
    }
}
