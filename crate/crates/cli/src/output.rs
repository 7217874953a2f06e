//! Rendering of command results and run manifests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use listdec::experiments::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// What a subcommand produced: structured records, a CSV table, and a
/// human-readable rendering.
#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<Value>,
    pub csv_header: Vec<String>,
    pub csv_rows: Vec<Vec<String>>,
    pub text: String,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, kind: &str, body: Value) {
        let mut rec = json!({ "schema": SCHEMA, "record": kind });
        if let (Some(dst), Value::Object(src)) = (rec.as_object_mut(), body) {
            dst.extend(src);
        }
        self.records.push(rec);
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.csv_header = cols.iter().map(|c| c.to_string()).collect();
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        self.csv_rows.push(cells.into_iter().collect());
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// Serializes the report. JSON output opens with a `run` record that
    /// carries the invocation (everything in the manifest except the timestamp).
    pub fn render(&self, format: Format, run: &Value) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut out = String::new();
                let mut head = json!({ "schema": SCHEMA, "record": "run" });
                if let (Some(dst), Value::Object(src)) = (head.as_object_mut(), run.clone()) {
                    dst.extend(src);
                }
                let _ = writeln!(out, "{head}");
                for r in &self.records {
                    let _ = writeln!(out, "{r}");
                }
                out
            }
            Format::Csv => {
                let mut out = String::new();
                let _ = writeln!(out, "{}", self.csv_header.join(","));
                for row in &self.csv_rows {
                    let _ = writeln!(out, "{}", row.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
                }
                out
            }
        }
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Everything needed to reproduce a run. `argv` re-parses to the same
/// invocation; `created_unix` is the only field that varies between reruns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub argv: Vec<String>,
    pub params: Value,
    pub seed: u64,
    pub outputs: Vec<PathBuf>,
    pub created_unix: u64,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
