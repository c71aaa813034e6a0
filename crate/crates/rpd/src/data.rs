//! Labeled datasets and their CSV representation.
//!
//! The on-disk format is a UTF-8, LF-terminated CSV with the header
//! `label,f0,f1,...,f{d-1}`. Labels are nonnegative integers; features are
//! 64-bit floats written with enough digits to round-trip exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::geometry::{GeometryError, PointCloud};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Points in `R^d` with integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    d: usize,
    features: Vec<f64>, // n x d row-major
    labels: Vec<usize>,
    source: Option<String>,
}

impl LabeledDataset {
    pub fn new(
        d: usize,
        features: Vec<f64>,
        labels: Vec<usize>,
        source: Option<String>,
    ) -> Result<Self, DataError> {
        if d == 0 {
            return Err(DataError::InvalidArgument(
                "dimension must be >= 1".into(),
            ));
        }
        if labels.is_empty() || features.len() != labels.len() * d {
            return Err(DataError::InvalidArgument(format!(
                "{} feature values do not form {} rows of dimension {d}",
                features.len(),
                labels.len()
            )));
        }
        Ok(LabeledDataset {
            d,
            features,
            labels,
            source,
        })
    }

    pub fn from_rows(rows: Vec<(Vec<f64>, usize)>) -> Result<Self, DataError> {
        if rows.is_empty() {
            return Err(DataError::InvalidArgument("dataset is empty".into()));
        }
        let d = rows[0].0.len();
        let mut features = Vec::with_capacity(rows.len() * d);
        let mut labels = Vec::with_capacity(rows.len());
        for (point, label) in rows {
            if point.len() != d {
                return Err(DataError::InvalidArgument(format!(
                    "row of dimension {} in a dataset of dimension {d}",
                    point.len()
                )));
            }
            features.extend_from_slice(&point);
            labels.push(label);
        }
        LabeledDataset::new(d, features, labels, None)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn set_source(&mut self, source: impl Into<String>) {
        self.source = Some(source.into());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], usize)> {
        self.features
            .chunks_exact(self.d)
            .zip(self.labels.iter().copied())
    }

    /// Sorted distinct labels present in the dataset.
    pub fn class_labels(&self) -> Vec<usize> {
        let mut labels = self.labels.clone();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    pub fn class_size(&self, label: usize) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// The points of one class, in dataset order.
    pub fn class_points(&self, label: usize) -> Result<PointCloud, GeometryError> {
        let mut data = Vec::new();
        for (point, l) in self.iter() {
            if l == label {
                data.extend_from_slice(point);
            }
        }
        PointCloud::from_flat(self.d, data)
    }

    /// All points, labels dropped.
    pub fn to_point_cloud(&self) -> PointCloud {
        PointCloud::from_flat(self.d, self.features.clone()).expect("dataset is nonempty")
    }
}

fn expected_header(d: usize) -> String {
    let mut header = String::from("label");
    for j in 0..d {
        let _ = write!(header, ",f{j}");
    }
    header
}

/// Parses a dataset from the documented CSV format. Errors carry the
/// 1-based line number.
pub fn load_csv(path: impl AsRef<Path>) -> Result<LabeledDataset, DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DataError::Parse {
        line: 1,
        message: "missing header row".into(),
    })?;
    let fields: Vec<&str> = header.split(',').collect();
    if fields.len() < 2 || fields[0] != "label" {
        return Err(DataError::Parse {
            line: 1,
            message: format!("header must be \"label,f0,...\", got {header:?}"),
        });
    }
    let d = fields.len() - 1;
    for (j, field) in fields[1..].iter().enumerate() {
        if *field != format!("f{j}") {
            return Err(DataError::Parse {
                line: 1,
                message: format!("expected header {:?}", expected_header(d)),
            });
        }
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let mut parts = line.split(',');
        let label_field = parts.next().unwrap_or("");
        let label: usize = label_field.parse().map_err(|_| DataError::Parse {
            line: line_no,
            message: format!("label {label_field:?} is not a nonnegative integer"),
        })?;
        let mut count = 0;
        for part in parts {
            let value: f64 = part.parse().map_err(|_| DataError::Parse {
                line: line_no,
                message: format!("feature {part:?} is not a number"),
            })?;
            features.push(value);
            count += 1;
        }
        if count != d {
            return Err(DataError::Parse {
                line: line_no,
                message: format!("row has {count} features, expected {d}"),
            });
        }
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(DataError::Parse {
            line: 1,
            message: "dataset has a header but no rows".into(),
        });
    }
    let mut dataset = LabeledDataset::new(d, features, labels, None)?;
    dataset.set_source(path.display().to_string());
    Ok(dataset)
}

/// Writes the documented CSV format. Feature values use the shortest
/// decimal representation that parses back to the identical 64-bit float.
pub fn save_csv(dataset: &LabeledDataset, path: impl AsRef<Path>) -> Result<(), DataError> {
    let path = path.as_ref();
    let mut out = String::new();
    out.push_str(&expected_header(dataset.dim()));
    out.push('\n');
    for (point, label) in dataset.iter() {
        let _ = write!(out, "{label}");
        for v in point {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })
}
