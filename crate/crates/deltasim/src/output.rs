//! Tabular output: comma-separated tables with a single header row and a
//! separate structured-text metadata sidecar. Numbers are serialized at full
//! round-trip precision (Rust's shortest-representation float formatting);
//! undefined observables appear as the literal token `undef`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::observables::ObsValue;

/// A rectangular result table plus its companion metadata document.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    header: Vec<String>,
    rows: Vec<Vec<ObsValue>>,
    metadata: Vec<(String, String)>,
}

impl OutputTable {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<ObsValue>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width differs from header"
        );
        self.rows.push(row);
    }

    pub fn push_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<ObsValue>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<ObsValue>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// The table as CSV text (header + rows, `\n` line endings).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    /// The metadata sidecar as `key: value` lines.
    pub fn metadata_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            if v.contains('\n') {
                // Block value: indented continuation lines.
                let _ = writeln!(out, "{k}: |");
                for line in v.lines() {
                    let _ = writeln!(out, "  {line}");
                }
            } else {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        out
    }

    /// Write `<path>` (CSV) and `<path>.meta` (sidecar).
    pub fn write_files(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        std::fs::write(sidecar_path(path), self.metadata_text())?;
        Ok(())
    }
}

/// Sidecar path convention: the data path with `.meta` appended.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".meta");
    PathBuf::from(os)
}

/// FNV-1a 64-bit hash, used to fingerprint canonical config text.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
