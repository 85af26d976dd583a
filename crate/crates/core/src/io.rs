//! Matrix files: `{"rows": m, "cols": n, "entries": [[re, im], ...]}`, row-major.
//!
//! Floats are written in shortest round-trip form, so a written file parses back
//! to the identical matrix.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::matrix::ComplexMatrix;

#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix, MatrixFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| MatrixFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    matrix_from_json(&text).map_err(|e| MatrixFileError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> std::io::Result<()> {
    fs::write(path, matrix_to_json(m) + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn round_trip_is_bit_exact() {
        let entries = vec![
            Complex64::new(0.1, -1.0 / 3.0),
            Complex64::new(1e-300, std::f64::consts::PI),
            Complex64::new(-0.0, 2.0f64.sqrt()),
            Complex64::new(123456.789, 5e-324),
        ];
        let m = ComplexMatrix::from_row_major(2, 2, entries.clone()).unwrap();
        let back = matrix_from_json(&matrix_to_json(&m)).unwrap();
        for (a, b) in back.row_major().iter().zip(&entries) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matrix_from_json("{\"rows\":1,\"cols\":2,\"entries\":[[1,0]]}").is_err());
        assert!(matrix_from_json("{\"rows\":0,\"cols\":0,\"entries\":[]}").is_err());
        assert!(matrix_from_json("[1, 2]").is_err());
    }
}
