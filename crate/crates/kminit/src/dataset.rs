//! Loading and normalization of delimited numeric datasets.
//!
//! Records are one per line, split on a delimiter character or on
//! whitespace. Rows containing the missing-value token are dropped whole,
//! and an optional class column is stripped into labels before the
//! remaining fields are parsed as finite reals.

use std::collections::BTreeSet;
use std::io::BufRead;

use crate::error::{Error, Result};

/// How to interpret a delimited text source.
#[derive(Debug, Clone)]
pub struct DatasetSchema {
    /// Field separator; `None` splits on runs of whitespace.
    pub delimiter: Option<char>,
    /// Column holding the class label, stripped into `Dataset::labels`.
    pub class_column: Option<usize>,
    /// Token marking a missing value; any row containing it is dropped.
    pub missing_token: String,
    pub has_header: bool,
}

impl Default for DatasetSchema {
    fn default() -> Self {
        Self {
            delimiter: Some(','),
            class_column: None,
            missing_token: "?".to_string(),
            has_header: false,
        }
    }
}

/// An immutable N x D numeric matrix with per-attribute extremes and
/// optional class labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    points: Vec<f64>, // row-major, n * d
    n: usize,
    d: usize,
    pub labels: Option<Vec<String>>,
    attr_min: Vec<f64>,
    attr_max: Vec<f64>,
}

impl Dataset {
    /// Build a dataset from row-major values. Every value must be finite.
    pub fn from_rows(name: &str, rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::EmptyDataset);
        }
        let n = rows.len();
        let mut points = Vec::with_capacity(n * d);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {} fields, found {}", d, row.len()),
                });
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: "non-finite value".to_string(),
                    });
                }
            }
            points.extend_from_slice(row);
        }
        let (attr_min, attr_max) = column_extremes(&points, n, d);
        Ok(Self {
            name: name.to_string(),
            points,
            n,
            d,
            labels,
            attr_min,
            attr_max,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.points[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.d)
    }

    pub fn attr_min(&self) -> &[f64] {
        &self.attr_min
    }

    pub fn attr_max(&self) -> &[f64] {
        &self.attr_max
    }

    /// Number of distinct class labels.
    pub fn class_count(&self) -> Result<usize> {
        let labels = self.labels.as_ref().ok_or(Error::MissingLabels)?;
        let distinct: BTreeSet<&str> = labels.iter().map(|s| s.as_str()).collect();
        Ok(distinct.len())
    }

    /// Centroid of the whole dataset.
    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.d];
        for row in self.rows() {
            for (acc, &v) in c.iter_mut().zip(row) {
                *acc += v;
            }
        }
        for acc in &mut c {
            *acc /= self.n as f64;
        }
        c
    }
}

fn column_extremes(points: &[f64], n: usize, d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut min = vec![f64::INFINITY; d];
    let mut max = vec![f64::NEG_INFINITY; d];
    for i in 0..n {
        for j in 0..d {
            let v = points[i * d + j];
            if v < min[j] {
                min[j] = v;
            }
            if v > max[j] {
                max[j] = v;
            }
        }
    }
    (min, max)
}

/// Parse a delimited text source according to `schema`.
///
/// Rows containing the missing token are dropped; the class column, when
/// present, is split off into labels. Blank lines are skipped.
pub fn load_delimited<R: BufRead>(name: &str, source: R, schema: &DatasetSchema) -> Result<Dataset> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if schema.has_header && idx == 0 {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = match schema.delimiter {
            Some(c) => trimmed.split(c).map(str::trim).collect(),
            None => trimmed.split_whitespace().collect(),
        };
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("ragged row: expected {} fields, found {}", w, fields.len()),
                })
            }
            _ => {}
        }
        if let Some(cc) = schema.class_column {
            if cc >= fields.len() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("class column {} out of range for {} fields", cc, fields.len()),
                });
            }
        }
        if fields.iter().any(|f| *f == schema.missing_token) {
            continue; // drop incomplete rows whole
        }
        let mut row = Vec::with_capacity(fields.len());
        for (j, field) in fields.iter().enumerate() {
            if Some(j) == schema.class_column {
                labels.push((*field).to_string());
                continue;
            }
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("non-numeric field '{}'", field),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite field '{}'", field),
                });
            }
            row.push(v);
        }
        rows.push(row);
    }

    let labels = if schema.class_column.is_some() {
        Some(labels)
    } else {
        None
    };
    Dataset::from_rows(name, rows, labels)
}

/// Min-max normalize every attribute into [0, 1].
///
/// Constant attributes map to all zeros. Idempotent: normalizing an
/// already-normalized dataset changes nothing.
pub fn min_max_normalize(ds: &Dataset) -> Dataset {
    let n = ds.n;
    let d = ds.d;
    let mut points = Vec::with_capacity(n * d);
    for row in ds.rows() {
        for j in 0..d {
            let lo = ds.attr_min[j];
            let hi = ds.attr_max[j];
            let v = if hi > lo { (row[j] - lo) / (hi - lo) } else { 0.0 };
            points.push(v);
        }
    }
    let (attr_min, attr_max) = column_extremes(&points, n, d);
    Dataset {
        name: ds.name.clone(),
        points,
        n,
        d,
        labels: ds.labels.clone(),
        attr_min,
        attr_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn schema(class: Option<usize>) -> DatasetSchema {
        DatasetSchema {
            class_column: class,
            ..DatasetSchema::default()
        }
    }

    #[test]
    fn parses_csv_with_class_column() {
        let ds = load_delimited("t", Cursor::new("1,2,a\n3,4,b\n5,6,a"), &schema(Some(2))).unwrap();
        assert_eq!(ds.n(), 3);
        assert_eq!(ds.d(), 2);
        assert_eq!(ds.labels.as_ref().unwrap(), &["a", "b", "a"]);
        assert_eq!(ds.class_count().unwrap(), 2);
    }

    #[test]
    fn drops_rows_with_missing_token() {
        let ds = load_delimited("t", Cursor::new("1,2\n1,?\n3,4"), &schema(None)).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn rejects_non_numeric_field() {
        let err = load_delimited("t", Cursor::new("1,2\n1,x"), &schema(None)).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = load_delimited("t", Cursor::new("1,2\n1,2,3"), &schema(None)).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn empty_after_filtering_is_an_error() {
        let err = load_delimited("t", Cursor::new("1,?\n?,2"), &schema(None)).unwrap_err();
        assert!(matches!(err, Error::EmptyDataset));
    }

    #[test]
    fn whitespace_delimited_input() {
        let mut s = schema(None);
        s.delimiter = None;
        let ds = load_delimited("t", Cursor::new("1 2\n3\t4"), &s).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn normalization_maps_to_unit_range() {
        let ds = Dataset::from_rows("t", vec![vec![0.0], vec![5.0], vec![10.0]], None).unwrap();
        let norm = min_max_normalize(&ds);
        let vals: Vec<f64> = norm.rows().map(|r| r[0]).collect();
        assert_eq!(vals, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn normalization_shifted_column() {
        let ds = Dataset::from_rows("t", vec![vec![-1.0], vec![0.0], vec![3.0]], None).unwrap();
        let norm = min_max_normalize(&ds);
        let vals: Vec<f64> = norm.rows().map(|r| r[0]).collect();
        assert_eq!(vals, vec![0.0, 0.25, 1.0]);
    }

    #[test]
    fn constant_column_normalizes_to_zero() {
        let ds = Dataset::from_rows("t", vec![vec![7.0], vec![7.0], vec![7.0]], None).unwrap();
        let norm = min_max_normalize(&ds);
        assert!(norm.rows().all(|r| r[0] == 0.0));
    }

    #[test]
    fn normalization_is_idempotent() {
        let ds = Dataset::from_rows(
            "t",
            vec![vec![1.0, -3.0], vec![4.0, 0.5], vec![2.5, 9.0]],
            None,
        )
        .unwrap();
        let once = min_max_normalize(&ds);
        let twice = min_max_normalize(&once);
        for (a, b) in once.rows().zip(twice.rows()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn class_count_requires_labels() {
        let ds = Dataset::from_rows("t", vec![vec![1.0]], None).unwrap();
        assert!(matches!(ds.class_count(), Err(Error::MissingLabels)));
    }
}
