//! CSV writing with deterministic float formatting, and the run manifest.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

/// Shortest decimal representation that parses back to the same double,
/// capped at 12 significant digits.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    for digits in 1..=12usize {
        let s = format!("{:.*e}", digits - 1, x);
        if s.parse::<f64>() == Ok(x) {
            return s;
        }
    }
    format!("{:.*e}", 11, x)
}

/// A CSV table: UTF-8, comma-separated, `.` decimal, mandatory header row.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { header: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        writeln!(out, "{}", self.header.join(",")).unwrap();
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One emitted file with its digest.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FileRecord {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// The run manifest: config echo, library version, wall clock, derived
/// quantities, and the emitted file list with content digests.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunManifest {
    pub version: String,
    pub regime: String,
    pub task: String,
    pub config: std::collections::BTreeMap<String, String>,
    pub wall_ms: u64,
    pub derived: std::collections::BTreeMap<String, serde_json::Value>,
    pub files: Vec<FileRecord>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

/// Write bytes and return the file record.
pub fn write_file(path: &Path, bytes: &[u8]) -> std::io::Result<FileRecord> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, bytes)?;
    Ok(FileRecord {
        path: path.to_string_lossy().into_owned(),
        bytes: bytes.len(),
        sha256: sha256_hex(bytes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        // Values whose shortest representation fits in 12 significant digits
        // come back bit-exact.
        for &x in &[0.0, 1.0, -1.5, 0.1, 0.25, 1.0e-300, 123456789.123, 6.02e23] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        // Longer values are capped at 12 digits, parsing back within 1e-11.
        for &x in &[2.0 / 3.0, std::f64::consts::PI, f64::MAX] {
            let back: f64 = format_float(x).parse().unwrap();
            assert!((back - x).abs() <= x.abs() * 1e-11);
        }
        assert_eq!(format_float(1.0), "1e0");
        assert_eq!(format_float(0.5), "5e-1");
        assert_eq!(format_float(-0.0), "0");
    }

    #[test]
    fn csv_bytes_deterministic() {
        let mut t1 = CsvTable::new(&["a", "b"]);
        t1.push(vec![1.0 / 3.0, 0.25]);
        let mut t2 = CsvTable::new(&["a", "b"]);
        t2.push(vec![1.0 / 3.0, 0.25]);
        assert_eq!(t1.to_bytes(), t2.to_bytes());
        let text = String::from_utf8(t1.to_bytes()).unwrap();
        assert!(text.starts_with("a,b\n"));
    }

    #[test]
    fn digest_matches_reference_vector() {
        // FIPS 180-2 test vector for "abc".
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
