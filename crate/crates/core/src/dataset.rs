//! The analysis-ready dataset: an encoded feature matrix with a binary
//! label and a multiclass traffic-type column, plus its lineage.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::{Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the appended binary label column in serialized datasets.
pub const LABEL_COLUMN: &str = "__label";
/// Name of the appended traffic-type column in serialized datasets.
pub const TYPE_COLUMN: &str = "__type";

/// One step in a dataset's history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum LineageStep {
    Loaded {
        source: String,
        rows: usize,
    },
    Encoded {
        categorical: Vec<String>,
        dropped_by_schema: Vec<String>,
    },
    Deduplicated {
        removed: usize,
    },
    DroppedConstant {
        columns: Vec<String>,
    },
    Sampled {
        seed: u64,
        num: usize,
        attempts: u32,
        statistic: Option<f64>,
        threshold: Option<f64>,
    },
    Balanced {
        minority_label: Option<u8>,
        minority_count: usize,
    },
    Note {
        text: String,
    },
}

impl fmt::Display for LineageStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineageStep::Loaded { source, rows } => write!(f, "loaded {rows} rows from {source}"),
            LineageStep::Encoded {
                categorical,
                dropped_by_schema,
            } => write!(
                f,
                "encoded categorical columns [{}]; schema dropped [{}]",
                categorical.join(", "),
                dropped_by_schema.join(", ")
            ),
            LineageStep::Deduplicated { removed } => {
                write!(f, "removed {removed} duplicate rows")
            }
            LineageStep::DroppedConstant { columns } => {
                write!(f, "dropped constant columns [{}]", columns.join(", "))
            }
            LineageStep::Sampled {
                seed,
                num,
                attempts,
                statistic,
                ..
            } => {
                write!(
                    f,
                    "sampled {num} rows with seed {seed} in {attempts} attempt(s)"
                )?;
                match statistic {
                    Some(s) => write!(f, ", chi-square {s}"),
                    None => write!(f, ", similarity undecidable"),
                }
            }
            LineageStep::Balanced {
                minority_label: Some(label),
                minority_count,
            } => write!(
                f,
                "balanced on minority label {label} ({minority_count} rows per class)"
            ),
            LineageStep::Balanced {
                minority_label: None,
                minority_count,
            } => write!(
                f,
                "binary classes already balanced ({minority_count} rows each); returned unchanged"
            ),
            LineageStep::Note { text } => f.write_str(text),
        }
    }
}

/// Ordered record of the operations that produced a [`Dataset`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Lineage {
    pub steps: Vec<LineageStep>,
}

impl Lineage {
    pub fn push(&mut self, step: LineageStep) {
        self.steps.push(step);
    }

    pub fn last_sampled(&self) -> Option<&LineageStep> {
        self.steps
            .iter()
            .rev()
            .find(|s| matches!(s, LineageStep::Sampled { .. }))
    }
}

impl fmt::Display for Lineage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

/// Encoded dataset.
///
/// Rows of `features` align with `binary_label` and `traffic_type`. Traffic
/// types are small integer ids into `class_names`, which is sorted
/// lexicographically so ids are stable regardless of row order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Array2<f64>,
    feature_names: Vec<String>,
    binary_label: Vec<u8>,
    traffic_type: Vec<u32>,
    class_names: Vec<String>,
    lineage: Lineage,
}

impl Dataset {
    pub fn new(
        features: Array2<f64>,
        feature_names: Vec<String>,
        binary_label: Vec<u8>,
        traffic_type: Vec<u32>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let rows = features.nrows();
        if feature_names.len() != features.ncols() {
            return Err(Error::InvalidArgument(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.ncols()
            )));
        }
        if binary_label.len() != rows || traffic_type.len() != rows {
            return Err(Error::InvalidArgument(format!(
                "label lengths ({}, {}) differ from row count {rows}",
                binary_label.len(),
                traffic_type.len()
            )));
        }
        if let Some(&bad) = binary_label.iter().find(|&&l| l > 1) {
            return Err(Error::InvalidArgument(format!("binary label {bad}")));
        }
        if let Some(&bad) = traffic_type
            .iter()
            .find(|&&t| t as usize >= class_names.len())
        {
            return Err(Error::InvalidArgument(format!(
                "traffic type id {bad} outside dictionary of {}",
                class_names.len()
            )));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite feature value".into()));
        }
        Ok(Self {
            features: features.as_standard_layout().into_owned(),
            feature_names,
            binary_label,
            traffic_type,
            class_names,
            lineage: Lineage::default(),
        })
    }

    /// Builds a dataset from per-row class names; the dictionary is the sorted
    /// set of distinct names and labels are 0 exactly for `normal_class`.
    pub fn from_class_names(
        features: Array2<f64>,
        feature_names: Vec<String>,
        types: &[impl AsRef<str>],
        normal_class: &str,
    ) -> Result<Self> {
        let (class_names, traffic_type) = class_dictionary(types);
        let binary_label = types
            .iter()
            .map(|t| u8::from(t.as_ref() != normal_class))
            .collect();
        Self::new(
            features,
            feature_names,
            binary_label,
            traffic_type,
            class_names,
        )
    }

    pub fn n_rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.n_rows() == 0
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn binary_label(&self) -> &[u8] {
        &self.binary_label
    }

    pub fn traffic_type(&self) -> &[u32] {
        &self.traffic_type
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_name(&self, id: u32) -> &str {
        &self.class_names[id as usize]
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    pub fn lineage(&self) -> &Lineage {
        &self.lineage
    }

    pub fn lineage_mut(&mut self) -> &mut Lineage {
        &mut self.lineage
    }

    pub fn with_step(mut self, step: LineageStep) -> Self {
        self.lineage.push(step);
        self
    }

    /// Names of the classes whose rows carry binary label 0.
    pub fn normal_class_names(&self) -> Vec<&str> {
        let mut seen = vec![false; self.class_names.len()];
        for (&t, &l) in self.traffic_type.iter().zip(&self.binary_label) {
            if l == 0 {
                seen[t as usize] = true;
            }
        }
        self.class_names
            .iter()
            .zip(seen)
            .filter_map(|(n, s)| s.then_some(n.as_str()))
            .collect()
    }

    /// New dataset made of the given rows, in the given order. The class
    /// dictionary and lineage are carried over unchanged.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select(Axis(0), indices),
            feature_names: self.feature_names.clone(),
            binary_label: indices.iter().map(|&i| self.binary_label[i]).collect(),
            traffic_type: indices.iter().map(|&i| self.traffic_type[i]).collect(),
            class_names: self.class_names.clone(),
            lineage: self.lineage.clone(),
        }
    }

    /// New dataset with only the given feature columns.
    pub fn select_columns(&self, columns: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select(Axis(1), columns),
            feature_names: columns
                .iter()
                .map(|&c| self.feature_names[c].clone())
                .collect(),
            binary_label: self.binary_label.clone(),
            traffic_type: self.traffic_type.clone(),
            class_names: self.class_names.clone(),
            lineage: self.lineage.clone(),
        }
    }

    /// Writes the encoded features followed by `__label` and `__type`
    /// (original class text). A header row is always written.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_csv_to(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn write_csv_to<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.feature_names.iter().map(String::as_str).collect();
        header.push(LABEL_COLUMN);
        header.push(TYPE_COLUMN);
        w.write_record(&header).map_err(csv_to_io)?;
        let mut record: Vec<String> = Vec::with_capacity(header.len());
        for i in 0..self.n_rows() {
            record.clear();
            // `Display` for f64 prints the shortest string that parses back
            // to the same bits.
            record.extend(self.features.row(i).iter().map(|v| v.to_string()));
            record.push(self.binary_label[i].to_string());
            record.push(self.class_name(self.traffic_type[i]).to_owned());
            w.write_record(&record).map_err(csv_to_io)?;
        }
        w.flush()
    }

    /// Reads a dataset previously written by [`Dataset::write_csv`].
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Dataset> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut ds = Self::read_csv_from(file, path)?;
        ds.lineage.push(LineageStep::Loaded {
            source: path.display().to_string(),
            rows: ds.n_rows(),
        });
        Ok(ds)
    }

    fn read_csv_from<R: std::io::Read>(input: R, path: &Path) -> Result<Dataset> {
        let csv_err = |e: csv::Error| Error::Csv {
            path: path.to_owned(),
            message: e.to_string(),
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(input);
        let header = reader.headers().map_err(csv_err)?.clone();
        let names: Vec<&str> = header.iter().collect();
        let label_col = names
            .iter()
            .position(|&n| n == LABEL_COLUMN)
            .ok_or_else(|| Error::MissingColumn(LABEL_COLUMN.into()))?;
        let type_col = names
            .iter()
            .position(|&n| n == TYPE_COLUMN)
            .ok_or_else(|| Error::MissingColumn(TYPE_COLUMN.into()))?;
        let feature_cols: Vec<usize> = (0..names.len())
            .filter(|&c| c != label_col && c != type_col)
            .collect();
        let feature_names: Vec<String> =
            feature_cols.iter().map(|&c| names[c].to_owned()).collect();

        let mut values = Vec::new();
        let mut labels = Vec::new();
        let mut types_text: Vec<String> = Vec::new();
        let mut type_ids: HashMap<String, u32> = HashMap::new();
        let mut raw_types = Vec::new();
        let mut record = csv::StringRecord::new();
        let mut row = 0usize;
        while reader
            .read_record(&mut record)
            .map_err(|e| ragged_or(e, path))?
        {
            row += 1;
            for &c in &feature_cols {
                let text = &record[c];
                let v = parse_finite(text).ok_or_else(|| Error::UnparseableNumber {
                    column: names[c].to_owned(),
                    row,
                    value: text.to_owned(),
                })?;
                values.push(v);
            }
            let label = match &record[label_col] {
                "0" => 0u8,
                "1" => 1u8,
                other => {
                    return Err(Error::UnparseableNumber {
                        column: LABEL_COLUMN.into(),
                        row,
                        value: other.to_owned(),
                    })
                }
            };
            labels.push(label);
            let ty = &record[type_col];
            let next = type_ids.len() as u32;
            let id = *type_ids.entry(ty.to_owned()).or_insert_with(|| {
                types_text.push(ty.to_owned());
                next
            });
            raw_types.push(id);
        }
        if row == 0 {
            return Err(Error::NoRows);
        }
        // Re-key classes by sorted name.
        let mut order: Vec<u32> = (0..types_text.len() as u32).collect();
        order.sort_by(|&a, &b| types_text[a as usize].cmp(&types_text[b as usize]));
        let mut remap = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let class_names = order
            .iter()
            .map(|&o| types_text[o as usize].clone())
            .collect();
        let traffic_type = raw_types.iter().map(|&t| remap[t as usize]).collect();
        let features = Array2::from_shape_vec((row, feature_cols.len()), values)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Dataset::new(features, feature_names, labels, traffic_type, class_names)
    }
}

/// Sorted distinct class names and the per-row ids into them.
pub(crate) fn class_dictionary(types: &[impl AsRef<str>]) -> (Vec<String>, Vec<u32>) {
    let mut class_names: Vec<String> = types.iter().map(|t| t.as_ref().to_owned()).collect();
    class_names.sort();
    class_names.dedup();
    let ids: HashMap<&str, u32> = class_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i as u32))
        .collect();
    let traffic_type = types.iter().map(|t| ids[t.as_ref()]).collect();
    (class_names, traffic_type)
}

pub(crate) fn parse_finite(text: &str) -> Option<f64> {
    text.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

pub(crate) fn ragged_or(e: csv::Error, path: &Path) -> Error {
    if let csv::ErrorKind::UnequalLengths {
        pos,
        expected_len,
        len,
    } = e.kind()
    {
        return Error::RaggedRow {
            row: pos.as_ref().map_or(0, |p| p.line()),
            expected: *expected_len as usize,
            found: *len as usize,
        };
    }
    Error::Csv {
        path: path.to_owned(),
        message: e.to_string(),
    }
}

fn csv_to_io(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn tiny() -> Dataset {
        Dataset::from_class_names(
            array![[1.0, 0.5], [2.0, -0.0], [3.25, 1e-300]],
            vec!["a".into(), "b".into()],
            &["normal", "smurf", "back"],
            "normal",
        )
        .unwrap()
    }

    #[test]
    fn class_dictionary_is_sorted() {
        let ds = tiny();
        assert_eq!(ds.class_names(), ["back", "normal", "smurf"]);
        assert_eq!(ds.traffic_type(), [1, 2, 0]);
        assert_eq!(ds.binary_label(), [0, 1, 1]);
        assert_eq!(ds.normal_class_names(), ["normal"]);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let ds = tiny();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.csv");
        ds.write_csv(&path).unwrap();
        let back = Dataset::read_csv(&path).unwrap();
        assert_eq!(back.feature_names(), ds.feature_names());
        assert_eq!(back.class_names(), ds.class_names());
        assert_eq!(back.traffic_type(), ds.traffic_type());
        for (x, y) in back.features().iter().zip(ds.features()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("a,b,__label,__type\n"));
    }

    #[test]
    fn rejects_inconsistent_lengths() {
        let err = Dataset::new(
            array![[1.0], [2.0]],
            vec!["a".into()],
            vec![0],
            vec![0, 0],
            vec!["x".into()],
        );
        assert!(err.is_err());
    }
}
