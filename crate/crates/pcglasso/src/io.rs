//! CSV readers and writers.
//!
//! Matrices are plain numeric CSV with one row per matrix row and no header;
//! the reader validates squareness and symmetry. Data files are observations
//! by variables with an optional header row, detected by the first row
//! containing any non-numeric field. Matrices are written with 17 significant
//! digits so that reading an emitted file reproduces the values exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mat::{DataMat, SymMat};
use crate::scalar::{fl, Scalar};

/// Read a square symmetric matrix from headerless numeric CSV.
pub fn read_matrix_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<SymMat<T>> {
    let rows = read_numeric_rows(path.as_ref(), false)?.0;
    if rows.is_empty() {
        return Err(Error::invalid("matrix file is empty"));
    }
    let tol = symmetric_tolerance(&rows);
    SymMat::try_from_rows(&rows, tol)
}

fn symmetric_tolerance<T: Scalar>(rows: &[Vec<T>]) -> T {
    let max_abs = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |m, v| m.max(v.abs()));
    fl::<T>(1e-10).max(fl::<T>(1e-12) * max_abs)
}

/// Read a data matrix (rows = observations), skipping one header row when the
/// first row has any non-numeric field. Returns the data and the header names
/// when present.
pub fn read_data_csv<T: Scalar>(path: impl AsRef<Path>) -> Result<(DataMat<T>, Option<Vec<String>>)> {
    let (rows, header) = read_numeric_rows(path.as_ref(), true)?;
    Ok((DataMat::from_rows(rows)?, header))
}

fn read_numeric_rows<T: Scalar>(
    path: &Path,
    allow_header: bool,
) -> Result<(Vec<Vec<T>>, Option<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)?;
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut header: Option<Vec<String>> = None;
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let mut row = Vec::with_capacity(record.len());
        let mut bad_field: Option<String> = None;
        for field in record.iter() {
            match field.parse::<f64>() {
                Ok(v) => row.push(
                    T::from_f64(v).ok_or_else(|| Error::CsvParse {
                        row: idx + 1,
                        message: format!("value {v} is not representable"),
                    })?,
                ),
                Err(_) => {
                    bad_field = Some(field.to_string());
                    break;
                }
            }
        }
        match bad_field {
            None => rows.push(row),
            Some(field) => {
                if allow_header && idx == 0 {
                    header = Some(record.iter().map(str::to_string).collect());
                } else {
                    return Err(Error::CsvParse {
                        row: idx + 1,
                        message: format!("non-numeric field {field:?}"),
                    });
                }
            }
        }
    }
    Ok((rows, header))
}

/// Format a float with 17 significant digits (round-trip exact for f64).
pub fn format_full<T: Scalar>(v: T) -> String {
    let v = v.to_f64().unwrap_or(f64::NAN);
    // Shortest exact form: integers and short fractions stay readable.
    let s = format!("{v}");
    if s.parse::<f64>() == Ok(v) {
        s
    } else {
        format!("{v:.16e}")
    }
}

/// Serialise a matrix as headerless CSV, one row per line.
pub fn matrix_to_csv<T: Scalar>(m: &SymMat<T>) -> String {
    let p = m.dim();
    let mut out = String::new();
    for i in 0..p {
        for j in 0..p {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_full(m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

/// Write a matrix to a CSV file.
pub fn write_matrix_csv<T: Scalar>(path: impl AsRef<Path>, m: &SymMat<T>) -> Result<()> {
    std::fs::write(path, matrix_to_csv(m))?;
    Ok(())
}
