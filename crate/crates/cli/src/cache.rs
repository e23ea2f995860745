//! Advisory coefficient cache for eta-quotient expansions.
//!
//! A single versioned text file. Each entry is one line keyed by the
//! canonical eta-spec string and the expansion order:
//!
//! ```text
//! tcores-cache v1
//! eta(3)^8|16|0,1,0,0,-8,0,0,20,...
//! ```
//!
//! The cache never changes results: a missing, deleted, or stale-version
//! file simply means the expansion is recomputed.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use tcores::num_bigint::BigInt;

const VERSION_LINE: &str = "tcores-cache v1";

pub struct ExpansionCache {
    path: PathBuf,
}

impl ExpansionCache {
    pub fn new(path: PathBuf) -> Self {
        Self { path }
    }

    pub fn path(&self) -> &PathBuf {
        &self.path
    }

    /// Entry lines of a valid cache file (empty for missing or
    /// wrong-version files).
    fn entries(&self) -> Vec<String> {
        let Ok(text) = fs::read_to_string(&self.path) else {
            return Vec::new();
        };
        let mut lines = text.lines();
        if lines.next() != Some(VERSION_LINE) {
            return Vec::new();
        }
        lines.filter(|l| !l.is_empty()).map(str::to_owned).collect()
    }

    pub fn lookup(&self, spec: &str, order: usize) -> Option<Vec<BigInt>> {
        let prefix = format!("{spec}|{order}|");
        for line in self.entries() {
            if let Some(rest) = line.strip_prefix(&prefix) {
                let coeffs: Option<Vec<BigInt>> = rest.split(',').map(|c| c.parse().ok()).collect();
                match coeffs {
                    Some(v) if v.len() == order + 1 => return Some(v),
                    // Corrupt entry: ignore it, the caller recomputes.
                    _ => return None,
                }
            }
        }
        None
    }

    pub fn store(&self, spec: &str, order: usize, coeffs: &[BigInt]) -> Result<()> {
        let mut entries = self.entries();
        let prefix = format!("{spec}|{order}|");
        entries.retain(|l| !l.starts_with(&prefix));
        let rendered: Vec<String> = coeffs.iter().map(BigInt::to_string).collect();
        entries.push(format!("{prefix}{}", rendered.join(",")));
        let mut out = String::from(VERSION_LINE);
        out.push('\n');
        for e in &entries {
            out.push_str(e);
            out.push('\n');
        }
        let mut file = fs::File::create(&self.path)
            .with_context(|| format!("cannot write cache file {}", self.path.display()))?;
        file.write_all(out.as_bytes())?;
        Ok(())
    }

    /// (file exists, version recognized, number of entries)
    pub fn stats(&self) -> (bool, bool, usize) {
        match fs::read_to_string(&self.path) {
            Err(_) => (false, false, 0),
            Ok(text) => {
                let valid = text.lines().next() == Some(VERSION_LINE);
                let entries = if valid { self.entries().len() } else { 0 };
                (true, valid, entries)
            }
        }
    }

    /// Remove the cache file. Returns whether a file was actually removed.
    pub fn clear(&self) -> Result<bool> {
        match fs::remove_file(&self.path) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(e).with_context(|| format!("cannot remove {}", self.path.display())),
        }
    }
}
