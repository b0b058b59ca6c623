//! Deterministic artifact emission: CSV tables, JSON documents and the
//! digest bookkeeping behind the run manifest.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

pub use crate::config::fmt_f64;

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Comma-separated table with a header row and shortest round-trip floats.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let cells: Vec<String> = row.iter().map(|x| fmt_f64(*x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// JSON number for finite values, the strings `"inf"`, `"-inf"`, `"nan"` otherwise.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

/// One written file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputRecord {
    /// Path relative to the output directory.
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Writes files into one directory and remembers what it wrote.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    records: Vec<OutputRecord>,
}

impl OutputDir {
    /// The directory itself is created by the first write.
    pub fn new(root: &Path) -> Self {
        Self {
            root: root.to_path_buf(),
            records: Vec::new(),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> io::Result<()> {
        let bytes = contents.as_bytes();
        fs::create_dir_all(&self.root)?;
        fs::write(self.root.join(name), bytes)?;
        self.records.retain(|r| r.file != name);
        self.records.push(OutputRecord {
            file: name.to_owned(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &Value) -> io::Result<()> {
        self.write(name, &json_text(value))
    }

    pub fn records(&self) -> &[OutputRecord] {
        &self.records
    }
}
