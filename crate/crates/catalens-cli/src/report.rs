//! Deterministic report emission: JSON reports with struct-ordered fields
//! and plot-ready CSVs. Identical inputs (including seed) produce
//! byte-identical files — no timestamps, no map iteration order.

use anyhow::{Context, Result};
use std::path::{Path, PathBuf};

/// Write a JSON value pretty-printed; returns the path written.
pub fn write_json(out_dir: &Path, name: &str, value: &serde_json::Value) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join(name);
    let mut text = serde_json::to_string_pretty(value).context("serializing report")?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Write CSV rows under a documented header; returns the path written.
pub fn write_csv(out_dir: &Path, name: &str, header: &str, rows: &[String]) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join(name);
    let mut text = String::with_capacity(rows.len() * 32 + header.len() + 2);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Render an f64 for CSV: shortest round-trip representation.
pub fn csv_f64(v: f64) -> String {
    let mut buf = ryu_like(v);
    if !buf.contains('.') && !buf.contains('e') && !buf.contains("inf") && !buf.contains("NaN") {
        buf.push_str(".0");
    }
    buf
}

fn ryu_like(v: f64) -> String {
    // serde_json's f64 formatting is the shortest round-trip form; reuse it
    serde_json::to_string(&v).unwrap_or_else(|_| format!("{v}"))
}
