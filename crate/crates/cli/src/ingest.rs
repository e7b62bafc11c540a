//! CSV time-series ingestion for infer mode.

use std::path::Path;

use lpboot_core::Series;

use crate::error::{CliError, Result};

/// Minimum numeric rows an ingested series must have.
pub const MIN_ROWS: usize = 5;

/// Read one numeric column from a headered CSV file into a [`Series`].
///
/// The first observation becomes the lag anchor `y_0`; the series is used
/// as-is (no demeaning). Rows are 1-based over the data (the header is row
/// 0). Missing fields and non-numeric or non-finite values are rejected.
pub fn ingest_csv(path: &Path, column: &str) -> Result<Series> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| map_csv_error(path, e))?;

    let headers = reader.headers().map_err(|e| map_csv_error(path, e))?;
    let col = headers
        .iter()
        .position(|name| name == column)
        .ok_or_else(|| CliError::MissingColumn(column.to_string()))?;

    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            row,
            message: e.to_string(),
        })?;
        let field = record.get(col).ok_or_else(|| CliError::Parse {
            path: path.to_path_buf(),
            row,
            message: format!("row has {} fields, column {column:?} is missing", record.len()),
        })?;
        let value: f64 = field.parse().map_err(|_| CliError::NonNumeric {
            row,
            value: field.to_string(),
        })?;
        if !value.is_finite() {
            return Err(CliError::NonNumeric {
                row,
                value: field.to_string(),
            });
        }
        values.push(value);
    }

    if values.len() < MIN_ROWS {
        return Err(CliError::TooShort {
            rows: values.len(),
            min: MIN_ROWS,
        });
    }
    Ok(Series::from_values(values)?)
}

fn map_csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        row: 0,
        message: e.to_string(),
    }
}

/// Subtract the sample mean from every value.
pub fn demean(series: &Series) -> Series {
    let values = series.values();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Series::from_values(values.iter().map(|v| v - mean).collect())
        .expect("demeaning preserves length and finiteness")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(body: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(body.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_named_column() {
        let f = write_csv("t,y\n1,1.0\n2,2.0\n3,3.0\n4,4.0\n5,5.0\n6,6.0\n");
        let s = ingest_csv(f.path(), "y").unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(s.sample_size(), 5);
    }

    #[test]
    fn too_short_file_is_rejected() {
        let f = write_csv("y\n1\n2\n3\n");
        assert!(matches!(
            ingest_csv(f.path(), "y").unwrap_err(),
            CliError::TooShort { rows: 3, min: 5 }
        ));
    }

    #[test]
    fn missing_column_is_reported() {
        let f = write_csv("y\n1\n2\n3\n4\n5\n");
        assert!(matches!(
            ingest_csv(f.path(), "gdp").unwrap_err(),
            CliError::MissingColumn(_)
        ));
    }

    #[test]
    fn nan_is_non_numeric_with_row_number() {
        let f = write_csv("y\n1\n2\n3\nNaN\n5\n");
        match ingest_csv(f.path(), "y").unwrap_err() {
            CliError::NonNumeric { row, value } => {
                assert_eq!(row, 4);
                assert_eq!(value, "NaN");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn text_is_non_numeric() {
        let f = write_csv("y\n1\n2\noops\n4\n5\n");
        assert!(matches!(
            ingest_csv(f.path(), "y").unwrap_err(),
            CliError::NonNumeric { row: 3, .. }
        ));
    }

    #[test]
    fn demean_centers_the_series() {
        let f = write_csv("y\n1\n2\n3\n4\n5\n");
        let s = demean(&ingest_csv(f.path(), "y").unwrap());
        assert_eq!(s.values(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
    }
}
