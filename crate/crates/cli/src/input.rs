// SPDX-License-Identifier: MIT OR Apache-2.0

//! Series input: one value per line, or a named column of a CSV file.
//! Blank lines and lines starting with `#` are ignored; any other
//! non-numeric cell is an error.

use std::fs;
use std::io::{self, Read};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

fn parse_cell(cell: &str, line: usize) -> Result<f64> {
    let cell = cell.trim();
    let v: f64 = cell
        .parse()
        .map_err(|_| anyhow!("line {line}: {cell:?} is not a number"))?;
    if !v.is_finite() {
        bail!("line {line}: {cell:?} is not finite");
    }
    Ok(v)
}

fn is_skipped(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// Parses a single-column series.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if is_skipped(line) {
            continue;
        }
        let line = line.trim().trim_end_matches(',');
        if line.contains(',') {
            bail!(
                "line {}: several columns found; select one with --column",
                i + 1
            );
        }
        out.push(parse_cell(line, i + 1)?);
    }
    Ok(out)
}

/// Parses the column named `column` of a headed CSV document.
pub fn parse_column(text: &str, column: &str) -> Result<Vec<f64>> {
    // Strip comments and blanks first so line numbers refer to the file.
    let kept: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !is_skipped(l))
        .collect();
    let body = kept.iter().map(|(_, l)| *l).collect::<Vec<_>>().join("\n");
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let headers = reader.headers().context("reading CSV header")?.clone();
    let idx = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| anyhow!("column {column:?} not found; header is {:?}", headers))?;
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let line = kept.get(row + 1).map_or(row + 2, |(l, _)| l + 1);
        let record = record.with_context(|| format!("line {line}"))?;
        let cell = record
            .get(idx)
            .ok_or_else(|| anyhow!("line {line}: missing column {column:?}"))?;
        out.push(parse_cell(cell, line)?);
    }
    Ok(out)
}

/// Reads `path` (`-` for standard input).
pub fn read_series(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    match column {
        Some(c) => parse_column(&text, c),
        None => parse_values(&text),
    }
}
