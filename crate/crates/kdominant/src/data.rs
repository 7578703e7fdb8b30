//! Datasets: fixed-dimension collections of points with CSV round-tripping.
//!
//! Coordinates are finite `f64` values compared exactly; ties are meaningful
//! (equal coordinates count toward the "less than or equal" side of the
//! dominance predicate but never as strict). Categorical data is stored as
//! small integer-valued floats, which compare exactly.

use crate::{Error, Result};
use std::path::Path;

/// A dataset of `n` points in `d` dimensions, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    d: usize,
    coords: Vec<f64>,
}

impl Dataset {
    /// Empty dataset with dimension `d >= 1`.
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(Dataset { d, coords: Vec::new() })
    }

    pub fn from_rows(d: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut ds = Dataset::new(d)?;
        for row in rows {
            ds.push(row)?;
        }
        Ok(ds)
    }

    /// Build from a row-major coordinate buffer whose length is a multiple
    /// of `d`.
    pub fn from_flat(d: usize, coords: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if coords.len() % d != 0 {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: coords.len() % d,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("coordinates must be finite".into()));
        }
        Ok(Dataset { d, coords })
    }

    pub fn push(&mut self, point: &[f64]) -> Result<()> {
        if point.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: point.len() });
        }
        if point.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("coordinates must be finite".into()));
        }
        self.coords.extend_from_slice(point);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d)
    }

    /// Read a dataset from CSV with the header `x1,...,xd`. Parse failures
    /// carry 1-based line numbers (the header is line 1).
    pub fn read_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path.as_ref())
            .map_err(|e| Error::Dataset { line: 1, message: e.to_string() })?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Dataset { line: 1, message: e.to_string() })?
            .clone();
        let d = headers.len();
        for (i, h) in headers.iter().enumerate() {
            let expected = format!("x{}", i + 1);
            if h != expected {
                return Err(Error::Dataset {
                    line: 1,
                    message: format!("expected header column {:?}, got {:?}", expected, h),
                });
            }
        }
        let mut ds = Dataset::new(d)?;
        let mut row = Vec::with_capacity(d);
        for (idx, record) in reader.records().enumerate() {
            let line = idx + 2;
            let record = record.map_err(|e| Error::Dataset { line, message: e.to_string() })?;
            if record.len() != d {
                return Err(Error::Dataset {
                    line,
                    message: format!("expected {} fields, got {}", d, record.len()),
                });
            }
            row.clear();
            for field in record.iter() {
                let v: f64 = field.parse().map_err(|_| Error::Dataset {
                    line,
                    message: format!("cannot parse {:?} as a number", field),
                })?;
                row.push(v);
            }
            ds.push(&row).map_err(|e| Error::Dataset { line, message: e.to_string() })?;
        }
        Ok(ds)
    }

    /// Write as CSV with the `x1,...,xd` header. Floats use Rust's shortest
    /// round-trip formatting, so reading back reproduces the exact values.
    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut writer = csv::Writer::from_path(path.as_ref())?;
        let header: Vec<String> = (1..=self.d).map(|i| format!("x{i}")).collect();
        writer
            .write_record(&header)
            .map_err(|e| Error::Dataset { line: 1, message: e.to_string() })?;
        for (i, p) in self.iter().enumerate() {
            let fields: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
            writer
                .write_record(&fields)
                .map_err(|e| Error::Dataset { line: i + 2, message: e.to_string() })?;
        }
        writer.flush()?;
        Ok(())
    }
}
