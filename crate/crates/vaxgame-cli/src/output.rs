//! Deterministic CSV emission: fixed numeric formatting (12 significant
//! digits, plain notation inside [1e-3, 1e6)) so repeated runs are
//! byte-identical and golden files stay stable.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Formats a number with 12 significant digits; scientific notation only
/// outside [1e-3, 1e6). Trailing zeros are trimmed.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let magnitude = x.abs();
    if (1e-3..1e6).contains(&magnitude) {
        let digits_before = magnitude.log10().floor() as i32 + 1;
        let decimals = (12 - digits_before).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        s
    } else {
        format!("{x:.11e}")
    }
}

pub fn format_bool(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

/// Quotes a CSV field when needed (commas, quotes or newlines inside).
fn escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Writes one CSV file under `out_dir`: a schema/parameter comment line, a
/// header row, then the data rows.
pub fn write_csv(
    out_dir: &Path,
    name: &str,
    command_summary: &str,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(out_dir).map_err(CliError::Io)?;
    let path = out_dir.join(name);
    let mut buf = String::new();
    buf.push_str(&format!(
        "# vaxgame-csv schema={SCHEMA_VERSION} {command_summary}\n"
    ));
    buf.push_str(&columns.join(","));
    buf.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len(), "row width mismatch in {name}");
        let line = row.iter().map(|f| escape(f)).collect::<Vec<_>>().join(",");
        buf.push_str(&line);
        buf.push('\n');
    }
    let mut file = std::fs::File::create(&path).map_err(CliError::Io)?;
    file.write_all(buf.as_bytes()).map_err(CliError::Io)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_range_formatting() {
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(18.0), "18");
        assert_eq!(format_value(-2.5), "-2.5");
        assert_eq!(format_value(0.2256), "0.2256");
        assert_eq!(format_value(1.0 / 56.0), "0.0178571428571");
    }

    #[test]
    fn scientific_outside_range() {
        assert_eq!(format_value(1e-10), "1.00000000000e-10");
        assert!(format_value(2.3e8).contains('e'));
        assert!(!format_value(999_999.0).contains('e'));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_value(3.582802547770700), "3.58280254777");
        assert_eq!(format_value(123456.789012345), "123456.789012");
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("plain"), "plain");
        assert_eq!(escape("a,b"), "\"a,b\"");
        assert_eq!(escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
