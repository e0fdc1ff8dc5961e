use std::collections::{BTreeSet, HashMap};

use ndarray::Array2;

use super::schema::{ColumnKind, SchemaSpec};
use super::table::RawTable;
use crate::dataset::{class_dictionary, parse_finite, Dataset, LineageStep};
use crate::error::{Error, Result};

/// Rank of each value within the sorted distinct values of its column.
pub fn ordinal_encode(values: &[String]) -> Vec<f64> {
    let distinct: BTreeSet<&str> = values.iter().map(String::as_str).collect();
    let rank: HashMap<&str, f64> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i as f64))
        .collect();
    values.iter().map(|v| rank[v.as_str()]).collect()
}

/// Turns a text table into a numeric [`Dataset`] according to `schema`.
pub fn encode(table: &RawTable, schema: &SchemaSpec) -> Result<Dataset> {
    let mut kinds = Vec::with_capacity(table.column_names().len());
    for name in table.column_names() {
        let kind = schema
            .kind_of(name)
            .ok_or_else(|| Error::InvalidSchema(format!("column `{name}` has no kind")))?;
        kinds.push(kind);
    }
    let type_name = schema.traffic_type_column();
    let type_values = table
        .column(type_name)
        .ok_or_else(|| Error::MissingColumn(type_name.to_owned()))?;

    let rows = table.row_count();
    let mut feature_names = Vec::new();
    let mut feature_columns: Vec<Vec<f64>> = Vec::new();
    let mut categorical = Vec::new();
    let mut dropped = Vec::new();
    let mut label_column = None;

    for ((name, values), kind) in table.column_names().iter().zip(table.columns()).zip(&kinds) {
        match kind {
            ColumnKind::Numeric => {
                let parsed = values
                    .iter()
                    .enumerate()
                    .map(|(row, v)| {
                        parse_finite(v).ok_or_else(|| Error::UnparseableNumber {
                            column: name.clone(),
                            row: row + 1,
                            value: v.clone(),
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                feature_names.push(name.clone());
                feature_columns.push(parsed);
            }
            ColumnKind::Categorical => {
                feature_names.push(name.clone());
                feature_columns.push(ordinal_encode(values));
                categorical.push(name.clone());
            }
            ColumnKind::BinaryLabel => label_column = Some((name, values)),
            ColumnKind::Drop => dropped.push(name.clone()),
            ColumnKind::TrafficType => {}
        }
    }

    let binary_label: Vec<u8> = type_values.iter().map(|t| schema.label_for(t)).collect();
    if let Some((name, values)) = label_column {
        for (row, (text, (&derived, ty))) in values
            .iter()
            .zip(binary_label.iter().zip(type_values))
            .enumerate()
        {
            let given = match parse_finite(text) {
                Some(0.0) => 0,
                Some(1.0) => 1,
                _ => 2,
            };
            if given != derived {
                return Err(Error::LabelMismatch {
                    column: name.clone(),
                    row: row + 1,
                    label: text.clone(),
                    traffic_type: ty.clone(),
                });
            }
        }
    }

    let mut features = Array2::<f64>::zeros((rows, feature_columns.len()));
    for (c, col) in feature_columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            features[[r, c]] = v;
        }
    }
    let (class_names, traffic_type) = class_dictionary(type_values);
    let ds = Dataset::new(
        features,
        feature_names,
        binary_label,
        traffic_type,
        class_names,
    )?;
    Ok(ds.with_step(LineageStep::Encoded {
        categorical,
        dropped_by_schema: dropped,
    }))
}
