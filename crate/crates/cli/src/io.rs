//! Matrix files and JSON output.

use std::fs;
use std::path::Path;

use isosym_core::mat::{CMatrix, MatrixJson};
use serde_json::Value;

use crate::commands::CliError;

/// Reads a matrix from `path`: a matrix JSON object, or an object holding
/// one under `key` (as fixture files do).
pub fn read_matrix(path: &Path, key: &str) -> Result<CMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(path.display().to_string(), e.to_string()))?;
    let inner = if value.get("rows").is_some() { value } else { value.get(key).cloned().unwrap_or(value) };
    let json: MatrixJson =
        serde_json::from_value(inner).map_err(|e| CliError::Input(path.display().to_string(), e.to_string()))?;
    CMatrix::try_from(json).map_err(|e| CliError::Input(path.display().to_string(), e.to_string()))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
    }
    fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn write_json<T: serde::Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("output serializes");
    write_text(path, &text)
}

/// A real number with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `println!` that tolerates a closed stdout, as when piped into `head`.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}
pub(crate) use out;
