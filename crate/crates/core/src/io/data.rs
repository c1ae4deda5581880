use std::fs;
use std::io::Write;
use std::path::Path;

use log::warn;

use super::LoadError;
use crate::types::SamplePair;

/// Selected columns of a numeric text file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedColumns {
    /// One vector per requested column, in request order.
    pub columns: Vec<Vec<f64>>,
    /// Rows skipped because a selected value was not finite.
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedPair {
    pub pair: SamplePair,
    pub dropped: usize,
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

fn parse_value(tok: &str) -> Option<f64> {
    match tok {
        "NA" | "na" | "NaN" | "nan" => Some(f64::NAN),
        _ => tok.parse().ok(),
    }
}

/// Reads the given zero-based columns from a comma- or whitespace-delimited
/// file. Blank lines and lines starting with `#` are skipped; rows with a
/// non-finite value in a selected column are dropped and counted.
pub fn load_columns(path: &Path, cols: &[usize]) -> Result<LoadedColumns, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut columns = vec![Vec::new(); cols.len()];
    let mut dropped = 0;
    let mut row = Vec::with_capacity(cols.len());
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = fields(line).collect();
        row.clear();
        for &c in cols {
            let tok = toks.get(c).ok_or_else(|| LoadError::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                msg: format!("column {c} missing (row has {} fields)", toks.len()),
            })?;
            let v = parse_value(tok).ok_or_else(|| LoadError::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                msg: format!("cannot parse '{tok}' as a number"),
            })?;
            row.push(v);
        }
        if row.iter().all(|v| v.is_finite()) {
            for (col, &v) in columns.iter_mut().zip(&row) {
                col.push(v);
            }
        } else {
            dropped += 1;
        }
    }
    if dropped > 0 {
        warn!(
            "{}: dropped {dropped} rows with non-finite values",
            path.display()
        );
    }
    Ok(LoadedColumns { columns, dropped })
}

/// Loads two columns as a [`SamplePair`]; at least three valid rows are required.
pub fn load_pair(path: &Path, x_col: usize, y_col: usize) -> Result<LoadedPair, LoadError> {
    let LoadedColumns {
        mut columns,
        dropped,
    } = load_columns(path, &[x_col, y_col])?;
    let y = columns.pop().unwrap_or_default();
    let x = columns.pop().unwrap_or_default();
    if x.len() < SamplePair::MIN_LEN {
        return Err(LoadError::TooFewRows {
            path: path.to_path_buf(),
            got: x.len(),
            need: SamplePair::MIN_LEN,
        });
    }
    Ok(LoadedPair {
        pair: SamplePair::new(x, y)?,
        dropped,
    })
}

/// Writes a pair as two space-separated columns with 17 significant digits,
/// enough to reload the exact same values.
pub fn write_pair<W: Write>(mut out: W, pair: &SamplePair) -> std::io::Result<()> {
    for (x, y) in pair.x().iter().zip(pair.y()) {
        writeln!(out, "{x:.16e} {y:.16e}")?;
    }
    Ok(())
}
