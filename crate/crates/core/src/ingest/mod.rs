//! CSV ingestion and preprocessing: parse, type the columns, encode
//! categoricals, remove duplicate records and constant features.

mod clean;
mod encode;
mod schema;
mod table;

pub use clean::{dedup, drop_constant_columns};
pub use encode::{encode, ordinal_encode};
pub use schema::{infer_schema, ColumnKind, SchemaOverride, SchemaSpec};
pub use table::{parse_csv, parse_csv_from, RawTable};

use crate::dataset::{Dataset, LineageStep};
use crate::error::Result;

/// Summary of one preprocessing run.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PreprocessReport {
    pub input_rows: usize,
    pub duplicates_removed: usize,
    pub dropped_constant: Vec<String>,
    pub dropped_by_schema: Vec<String>,
    pub categorical: Vec<String>,
    pub output_rows: usize,
    pub output_features: usize,
}

/// Runs encode, dedup and constant-column removal in that order.
pub fn preprocess(table: &RawTable, schema: &SchemaSpec) -> Result<(Dataset, PreprocessReport)> {
    let encoded = encode(table, schema)?;
    let deduped = dedup(&encoded);
    let cleaned = drop_constant_columns(&deduped)?;

    let mut report = PreprocessReport {
        input_rows: table.row_count(),
        duplicates_removed: 0,
        dropped_constant: Vec::new(),
        dropped_by_schema: Vec::new(),
        categorical: Vec::new(),
        output_rows: cleaned.n_rows(),
        output_features: cleaned.n_features(),
    };
    for step in &cleaned.lineage().steps {
        match step {
            LineageStep::Encoded {
                categorical,
                dropped_by_schema,
            } => {
                report.categorical = categorical.clone();
                report.dropped_by_schema = dropped_by_schema.clone();
            }
            LineageStep::Deduplicated { removed } => report.duplicates_removed = *removed,
            LineageStep::DroppedConstant { columns } => report.dropped_constant = columns.clone(),
            _ => {}
        }
    }
    Ok((cleaned, report))
}
