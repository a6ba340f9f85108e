//! Output plumbing: the config hash that stamps every artifact, header
//! lines, float rendering, and file writing.
//!
//! Numbers are rendered with Rust's shortest-roundtrip formatting, so a
//! given config always produces byte-identical files.

use std::path::{Path, PathBuf};

use driven_revivals::error::Error;
use driven_revivals::fingerprint::fnv1a64;

use crate::CliError;

pub const TOOL: &str = "drivenrev";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 64-bit FNV-1a over a canonical JSON encoding.
pub fn hash_canonical(canonical_json: &str) -> u64 {
    fnv1a64(canonical_json.as_bytes())
}

/// First line of every CSV/SVG artifact: tool, version, config hash.
pub fn csv_header(config_hash: u64) -> String {
    format!("# {TOOL} {VERSION} config={config_hash:016x}")
}

pub fn svg_header(config_hash: u64) -> String {
    format!("<!-- {TOOL} {VERSION} config={config_hash:016x} -->")
}

/// Shortest-roundtrip decimal rendering.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        CliError::Core(Error::Domain(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        )))
    })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| {
        CliError::Core(Error::Domain(format!("cannot write {}: {e}", path.display())))
    })?;
    Ok(path)
}
