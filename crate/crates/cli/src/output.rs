//! Deterministic file output and the matching readers. Floats are written
//! with 17 significant digits so every CSV field re-parses to the exact f64;
//! JSON uses serde_json's shortest-round-trip float encoding.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::CliError;

/// 17-significant-digit float form, exact under `str::parse::<f64>()`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Optional float: empty cell encodes `None`.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<PathBuf, CliError> {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        writeln!(out, "{}", row.join(",")).expect("string write");
    }
    let path = dir.join(name);
    write_text(&path, &out)?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::io(format!("cannot encode {name}: {e}")))?;
    text.push('\n');
    let path = dir.join(name);
    write_text(&path, &text)?;
    Ok(path)
}

/// Parsed CSV: header fields plus rows of string cells.
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn read_csv(path: &Path) -> Result<CsvTable, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::usage(format!("{}: empty file", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Ok(CsvTable { header, rows })
}

pub fn parse_f64(cell: &str, path: &Path, line: usize) -> Result<f64, CliError> {
    cell.trim().parse().map_err(|_| {
        CliError::usage(format!(
            "{} line {line}: '{cell}' is not a number",
            path.display()
        ))
    })
}

/// Scene file: header `theta_deg,re,im`, one pixel per line, angles strictly
/// increasing. Errors carry the 1-based line number.
pub fn read_scene(path: &Path) -> Result<(Vec<f64>, Vec<Complex64>), CliError> {
    let table = read_csv(path)?;
    if table.header != ["theta_deg", "re", "im"] {
        return Err(CliError::usage(format!(
            "{} line 1: expected header 'theta_deg,re,im'",
            path.display()
        )));
    }
    let mut angles = Vec::new();
    let mut reflectivity = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let line = i + 2;
        if row.len() != 3 {
            return Err(CliError::usage(format!(
                "{} line {line}: expected 3 fields, got {}",
                path.display(),
                row.len()
            )));
        }
        angles.push(parse_f64(&row[0], path, line)?);
        let re = parse_f64(&row[1], path, line)?;
        let im = parse_f64(&row[2], path, line)?;
        reflectivity.push(Complex64::new(re, im));
    }
    Ok((angles, reflectivity))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_exactly() {
        for &x in &[
            0.0,
            1.0,
            -2.881311,
            59.0e9,
            1.0 / 3.0,
            f64::MIN_POSITIVE,
            1.7976931348623157e308,
            -4.2441318157838756e-11,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s} -> {back}");
        }
    }

    #[test]
    fn scene_parse_errors_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scene.csv");
        std::fs::write(&path, "theta_deg,re,im\n-10.0,1.0,0.0\n0.0,abc,0.0\n").unwrap();
        let err = read_scene(&path).unwrap_err();
        assert!(err.message().contains("line 3"), "{}", err.message());
        std::fs::write(&path, "theta,re,im\n").unwrap();
        let err = read_scene(&path).unwrap_err();
        assert!(err.message().contains("line 1"));
        std::fs::write(&path, "theta_deg,re,im\n-10.0,1.0\n").unwrap();
        let err = read_scene(&path).unwrap_err();
        assert!(err.message().contains("line 2"));
    }
}
