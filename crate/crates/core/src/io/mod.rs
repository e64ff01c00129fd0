//! CSV persistence for every artifact of the pipeline.
//!
//! Parsers take the file text plus an `origin` label used in error messages,
//! so they can be driven from memory. Writers return the file text. Files are
//! comma-separated UTF-8 with a mandatory header row and LF line endings;
//! floats use [`format_float`].

mod tables;

use std::path::Path;

pub use tables::*;

use crate::error::{Error, Result};

/// Formats a float with 9 significant digits in the style of C's `%.9g`:
/// fixed notation for decimal exponents in `-4..9`, scientific otherwise,
/// trailing zeros removed. Negative zero prints as `0`.
///
/// ```
/// use coughrank::io::format_float;
/// assert_eq!(format_float(0.1 + 0.2), "0.3");
/// assert_eq!(format_float(1.0 / 3.0), "0.333333333");
/// assert_eq!(format_float(2.5e-7), "2.5e-07");
/// assert_eq!(format_float(-1234.5), "-1234.5");
/// ```
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// A parsed CSV body: header names and data rows with their 1-based line
/// numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<(u64, Vec<String>)>,
}

pub fn read_csv(text: &str, origin: &str) -> Result<CsvTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line());
        Error::parse(origin, line, e.to_string())
    };
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    if header.iter().all(String::is_empty) {
        return Err(Error::parse(origin, 1, "missing header row"));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    Ok(CsvTable { header, rows })
}

/// Serializes rows under a header, quoting only where needed.
pub fn write_csv<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    // writing to a Vec cannot fail
    let _ = writer.write_record(header);
    for row in rows {
        let _ = writer.write_record(&row);
    }
    let bytes = writer.into_inner().unwrap_or_default();
    String::from_utf8(bytes).unwrap_or_default()
}

pub(crate) fn expect_header(table: &CsvTable, expected: &[&str], origin: &str) -> Result<()> {
    if table.header != expected {
        return Err(Error::parse(
            origin,
            1,
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                table.header.join(",")
            ),
        ));
    }
    Ok(())
}

pub(crate) fn parse_number(cell: &str, column: &str, origin: &str, line: u64) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(
            origin,
            line,
            format!("column {column}: expected a finite number, found {cell:?}"),
        )),
    }
}
