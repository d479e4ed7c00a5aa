//! Fixed CSV number formatting and file assembly.

use std::path::Path;

use crate::CliError;

/// 17 significant digits in scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Formats a row, failing on the first non-finite value.
pub fn row(op: &str, label: &str, values: &[f64]) -> Result<String, CliError> {
    let mut out = String::from(label);
    for &v in values {
        if !v.is_finite() {
            return Err(CliError::NonFinite(op.to_string()));
        }
        out.push(',');
        out.push_str(&num(v));
    }
    out.push('\n');
    Ok(out)
}

pub fn write(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
