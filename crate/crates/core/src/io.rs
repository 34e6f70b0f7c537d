//! Text and CSV formats shared by the CLI and the test suites.
//!
//! - permutation text: one line, space-separated `sigma(1) .. sigma(n)`
//! - permutation CSV: header `i,sigma_i`, rows 1..n
//! - Dyck path text: word over U/D
//! - floats in CSV: 17 significant digits, so doubles round-trip exactly

use std::io::{BufRead, Write};

use crate::dyck::DyckPath;
use crate::perm::Permutation;
use crate::{Error, Result};

/// 17-significant-digit scientific form; parses back to the identical f64.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn permutation_to_line(p: &Permutation) -> String {
    p.as_slice()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn permutation_from_line(line: &str) -> Result<Permutation> {
    let values: Result<Vec<u32>> = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad value {tok:?}: {e}")))
        })
        .collect();
    Permutation::new(values?)
}

pub fn write_permutation_csv(w: &mut impl Write, p: &Permutation) -> Result<()> {
    writeln!(w, "i,sigma_i")?;
    for i in 1..=p.len() {
        writeln!(w, "{i},{}", p.get(i))?;
    }
    Ok(())
}

pub fn read_permutation_csv(r: impl BufRead) -> Result<Permutation> {
    let mut values = Vec::new();
    for (line_no, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (line_no == 0 && trimmed.starts_with("i,")) {
            continue;
        }
        let mut parts = trimmed.split(',');
        let i: usize = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing index", line_no + 1)))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)))?;
        let v: u32 = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing value", line_no + 1)))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", line_no + 1)))?;
        if i != values.len() + 1 {
            return Err(Error::Parse(format!(
                "line {}: expected index {}, found {i}",
                line_no + 1,
                values.len() + 1
            )));
        }
        values.push(v);
    }
    Permutation::new(values)
}

/// Tries CSV first (header or comma present), falls back to the one-line
/// format.
pub fn read_permutation_auto(content: &str) -> Result<Permutation> {
    if content.contains(',') {
        read_permutation_csv(std::io::BufReader::new(content.as_bytes()))
    } else {
        permutation_from_line(content.trim())
    }
}

pub fn write_dyck_heights_csv(w: &mut impl Write, d: &DyckPath) -> Result<()> {
    writeln!(w, "i,height")?;
    for (i, h) in d.heights().iter().enumerate() {
        writeln!(w, "{i},{h}")?;
    }
    Ok(())
}

pub fn write_permuton_cdf_csv(
    w: &mut impl Write,
    grid: &crate::permuton::PermutonGrid,
) -> Result<()> {
    writeln!(w, "i,j,cdf")?;
    for i in 0..=grid.resolution() {
        for j in 0..=grid.resolution() {
            writeln!(w, "{i},{j},{}", format_f64(grid.at(i, j)))?;
        }
    }
    Ok(())
}

/// Writes a CSV with one header row and rows of 17-digit floats.
pub fn write_float_csv(w: &mut impl Write, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{header}")?;
    for row in rows {
        let line = row
            .iter()
            .map(|&x| format_f64(x))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}")?;
    }
    Ok(())
}
