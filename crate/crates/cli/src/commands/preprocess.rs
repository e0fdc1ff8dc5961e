use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use idsample_core::ingest::{parse_csv, preprocess, SchemaOverride};

use crate::config::{input_path, output_dir, CommonArgs, FileConfig};
use crate::output::Output;

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Raw CSV file.
    #[arg(long, env = "IDSAMPLE_INPUT")]
    pub input: Option<PathBuf>,
    /// `key=value` file overriding the inferred column kinds.
    #[arg(long, env = "IDSAMPLE_SCHEMA", value_name = "FILE")]
    pub schema: Option<PathBuf>,
    /// Column holding the traffic type.
    #[arg(long, env = "IDSAMPLE_TYPE_COLUMN")]
    pub type_column: Option<String>,
    /// Traffic type value of normal traffic.
    #[arg(long, env = "IDSAMPLE_NORMAL")]
    pub normal: Option<String>,
    /// The input has no header row; columns are named col0, col1, ...
    #[arg(long)]
    pub no_header: bool,
}

pub fn run(args: &PreprocessArgs) -> anyhow::Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let input = input_path(args.input.as_ref(), &file)?;
    let schema_path = args.schema.clone().or_else(|| file.schema.clone());
    let overrides = match &schema_path {
        Some(p) => SchemaOverride::load(p)?,
        None => SchemaOverride::default(),
    };
    let type_column = args
        .type_column
        .clone()
        .or_else(|| file.type_column.clone());
    let normal = args.normal.clone().or_else(|| file.normal.clone());

    let table = parse_csv(&input, !args.no_header)?;
    let schema = overrides
        .resolve(&table, type_column.as_deref(), normal.as_deref())
        .with_context(|| format!("resolving schema for {}", input.display()))?;
    let (ds, report) = preprocess(&table, &schema)
        .with_context(|| format!("preprocessing {}", input.display()))?;

    let mut out = Output::create(&output_dir(&args.common, &file), "preprocess")?;
    out.with(
        "dataset.csv",
        "dataset",
        "encoded, deduplicated dataset",
        |p| ds.write_csv(p),
    )?;
    let schema_text: String = schema
        .columns()
        .iter()
        .map(|(name, kind)| format!("{name}={kind}\n"))
        .collect();
    out.text(
        "schema.txt",
        "schema",
        "resolved column kinds",
        &format!(
            "traffic_type={}\nnormal={}\n{schema_text}",
            schema.traffic_type_column(),
            schema.normal_class_name()
        ),
    )?;
    out.json(
        "preprocess.json",
        "report",
        "duplicates removed and columns dropped",
        &report,
    )?;
    out.text(
        "provenance.txt",
        "provenance",
        "lineage of dataset.csv",
        &ds.lineage().to_string(),
    )?;
    out.finish()?;

    println!(
        "{} rows in, {} duplicates removed, {} rows out, {} features",
        report.input_rows, report.duplicates_removed, report.output_rows, report.output_features
    );
    if !report.dropped_constant.is_empty() {
        println!(
            "dropped constant columns: {}",
            report.dropped_constant.join(", ")
        );
    }
    Ok(())
}
