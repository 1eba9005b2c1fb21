//! Output plumbing shared by every subcommand: format selection, the JSON
//! schema version, checksums, and file-or-stdout emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sumset_core::CountVector;

/// Version stamp on every JSON document this binary emits.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// FNV-1a, 64-bit.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Checksum of a count vector: FNV-1a over the decimal rendering of each
/// entry in index order, one `\n` after each.  Decimal text keeps the hash
/// independent of the internal integer representation.
pub fn count_checksum(counts: &CountVector) -> u64 {
    let mut bytes = Vec::new();
    for i in 0..counts.len() {
        bytes.extend_from_slice(counts.entry_decimal(i).as_bytes());
        bytes.push(b'\n');
    }
    fnv1a64(&bytes)
}

pub fn hex64(x: u64) -> String {
    format!("{x:#018x}")
}

/// What a subcommand hands back to `main`: the rendered output and whether a
/// verified property failed (exit code 1 instead of 0).
pub struct CommandResult {
    pub text: String,
    pub failed: bool,
}

impl CommandResult {
    pub fn ok(text: String) -> CommandResult {
        CommandResult {
            text,
            failed: false,
        }
    }
}

/// Writes to `--out PATH` when given, stdout otherwise.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Serializes a JSON document with a trailing newline.  Field order follows
/// the struct declaration, so identical inputs give byte-identical output.
pub fn to_json_line<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

/// Atomic file replace: write a sibling temp file, then rename over the
/// target so readers never observe a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming over {}", path.display()))?;
    Ok(())
}
