//! Plain-text tuple files: `#` comment lines followed by one integer per
//! line, strictly increasing.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TupleFileError {
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: not an integer: {text:?}")]
    BadInteger { line: usize, text: String },
    #[error("line {line}: values must be strictly increasing")]
    NotIncreasing { line: usize },
    #[error("file contains no values")]
    Empty,
}

/// Write `values` with a small header recording size and diameter.
pub fn write_tuple(path: &Path, values: &[i64]) -> Result<(), TupleFileError> {
    let mut out = String::new();
    writeln!(out, "# k = {}", values.len()).unwrap();
    if let (Some(first), Some(last)) = (values.first(), values.last()) {
        writeln!(out, "# diameter = {}", last - first).unwrap();
    }
    for v in values {
        writeln!(out, "{v}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read a tuple file, skipping blank and `#` lines and checking order.
pub fn read_tuple(path: &Path) -> Result<Vec<i64>, TupleFileError> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let v: i64 = trimmed
            .parse()
            .map_err(|_| TupleFileError::BadInteger { line, text: trimmed.to_string() })?;
        if let Some(&prev) = values.last() {
            if v <= prev {
                return Err(TupleFileError::NotIncreasing { line });
            }
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(TupleFileError::Empty);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        let values = vec![-4, 0, 2, 8, 12];
        write_tuple(&path, &values).unwrap();
        assert_eq!(read_tuple(&path).unwrap(), values);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# k = 5\n# diameter = 16\n"));
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        fs::write(&path, "# anything\n\n0\n  2 \n# mid\n6\n").unwrap();
        assert_eq!(read_tuple(&path).unwrap(), vec![0, 2, 6]);
    }

    #[test]
    fn rejects_disorder_and_junk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        fs::write(&path, "0\n2\n2\n").unwrap();
        assert!(matches!(read_tuple(&path), Err(TupleFileError::NotIncreasing { line: 3 })));
        fs::write(&path, "0\ntwo\n").unwrap();
        assert!(matches!(read_tuple(&path), Err(TupleFileError::BadInteger { line: 2, .. })));
        fs::write(&path, "# nothing\n").unwrap();
        assert!(matches!(read_tuple(&path), Err(TupleFileError::Empty)));
    }
}
