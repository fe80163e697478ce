use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    fs::write(path, body).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Emits the report to `PREFIX.json` or stdout, and the figures to
/// `PREFIX<suffix>` when a prefix is given.
pub fn emit(out: Option<&Path>, report: &Value, figures: &[(&str, String)]) -> Result<()> {
    let text = serde_json::to_string_pretty(report).expect("reports are plain JSON") + "\n";
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(prefix) => {
            write(&with_suffix(prefix, ".json"), &text)?;
            for (suffix, svg) in figures {
                write(&with_suffix(prefix, suffix), svg)?;
            }
            Ok(())
        }
    }
}
