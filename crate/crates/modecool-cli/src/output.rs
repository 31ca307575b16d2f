//! Deterministic result emission: a structured result document (TOML) and a
//! flat delimited table (CSV), both carrying the same header block.
//!
//! Reals are printed with 17 significant digits so every value re-parses to
//! the identical bits; identical configs therefore produce bit-identical
//! files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::JobConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, full round-trip.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    format!("{x:.16e}")
}

/// One table value.
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Scalar entries of the result document, emitted in insertion order.
pub struct ResultDoc {
    entries: Vec<(String, String)>,
}

impl ResultDoc {
    pub fn new() -> Self {
        ResultDoc { entries: Vec::new() }
    }

    pub fn int(&mut self, key: &str, value: i64) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn real(&mut self, key: &str, value: f64) {
        self.entries.push((key.to_string(), fmt_real(value)));
    }

    pub fn text(&mut self, key: &str, value: &str) {
        self.entries
            .push((key.to_string(), format!("{:?}", value)));
    }

    pub fn boolean(&mut self, key: &str, value: bool) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn real_list(&mut self, key: &str, values: impl IntoIterator<Item = f64>) {
        let body: Vec<String> = values.into_iter().map(fmt_real).collect();
        self.entries
            .push((key.to_string(), format!("[{}]", body.join(", "))));
    }

    pub fn int_list(&mut self, key: &str, values: impl IntoIterator<Item = i64>) {
        let body: Vec<String> = values.into_iter().map(|v| v.to_string()).collect();
        self.entries
            .push((key.to_string(), format!("[{}]", body.join(", "))));
    }
}

fn header_block(command: &str) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "tool = \"modecool\"");
    let _ = writeln!(h, "tool_version = {:?}", TOOL_VERSION);
    let _ = writeln!(h, "command = {command:?}");
    let _ = writeln!(h, "quadrature_convention = \"x = a + a\\u2020, p = -i(a - a\\u2020); ordering (x_1..x_N, p_1..p_N)\"");
    let _ = writeln!(h, "units = \"frequencies and rates in 2\\u03c0\\u00d7MHz\"");
    let _ = writeln!(h, "indices = \"qubit and mode indices are 1-based\"");
    h
}

fn resolved_config_toml(config: &JobConfig) -> String {
    toml::to_string(config).unwrap_or_else(|e| format!("# serialization failed: {e}"))
}

/// Write `<out>/result.toml`.
pub fn write_result(
    out_dir: &Path,
    command: &str,
    config: &JobConfig,
    doc: &ResultDoc,
) -> std::io::Result<()> {
    let mut text = String::new();
    let _ = writeln!(text, "[header]");
    text.push_str(&header_block(command));
    let _ = writeln!(text);
    let _ = writeln!(text, "[result]");
    for (key, value) in &doc.entries {
        let _ = writeln!(text, "{key} = {value}");
    }
    let _ = writeln!(text);
    let _ = writeln!(text, "[config]");
    text.push_str(&resolved_config_toml(config));
    fs::write(out_dir.join("result.toml"), text)
}

/// Write `<out>/table.csv` with a '#'-prefixed header block.
pub fn write_table(
    out_dir: &Path,
    command: &str,
    config: &JobConfig,
    columns: &[&str],
    rows: &[Vec<Cell>],
) -> std::io::Result<()> {
    let mut text = String::new();
    for line in header_block(command).lines() {
        let _ = writeln!(text, "# {line}");
    }
    for line in resolved_config_toml(config).lines() {
        let _ = writeln!(text, "# config: {line}");
    }
    let _ = writeln!(text, "{}", columns.join(","));
    for row in rows {
        let body: Vec<String> = row.iter().map(Cell::render).collect();
        let _ = writeln!(text, "{}", body.join(","));
    }
    fs::write(out_dir.join("table.csv"), text)
}

/// Write `<out>/error.toml` describing a failed run.
pub fn write_error(out_dir: &Path, command: &str, kind: &str, message: &str) -> std::io::Result<()> {
    let mut text = String::new();
    let _ = writeln!(text, "[error]");
    let _ = writeln!(text, "tool_version = {TOOL_VERSION:?}");
    let _ = writeln!(text, "command = {command:?}");
    let _ = writeln!(text, "kind = {kind:?}");
    let _ = writeln!(text, "message = {message:?}");
    fs::write(out_dir.join("error.toml"), text)
}
