use std::path::{Path, PathBuf};

use clap::Args;
use idsample_core::report::{render_comparison_table, ComparisonEntry};
use idsample_core::{compare_all_features, compare_pca, Dataset};

use crate::config::{alpha, input_path, output_dir, CommonArgs, FileConfig, PcaArgs, PcaSettings};
use crate::output::Output;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Preprocessed original dataset CSV.
    #[arg(long, env = "IDSAMPLE_INPUT")]
    pub input: Option<PathBuf>,
    /// Sample CSV to compare against the original.
    #[arg(long, env = "IDSAMPLE_SAMPLE")]
    pub sample: PathBuf,
    /// Significance level of the Z-tests. Default 0.05.
    #[arg(long, env = "IDSAMPLE_ALPHA")]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub pca: PcaArgs,
}

pub(crate) fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn run(args: &ValidateArgs) -> anyhow::Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let input = input_path(args.input.as_ref(), &file)?;
    let alpha = alpha(args.alpha, &file)?;
    let pca = PcaSettings::resolve(&args.pca, &file)?;
    let original = Dataset::read_csv(&input)?;
    let sample = Dataset::read_csv(&args.sample)?;

    let entry = ComparisonEntry {
        dataset: stem(&input),
        sample: stem(&args.sample),
        features: compare_all_features(&original, &sample, alpha)?,
        pca: compare_pca(&original, &sample, pca.options(), alpha, pca.mode)?,
    };
    let table = render_comparison_table(std::slice::from_ref(&entry));

    let mut out = Output::create(&output_dir(&args.common, &file), "validate")?;
    out.text(
        "comparison.tsv",
        "comparison_table",
        "Z-test verdicts per method",
        &table,
    )?;
    out.json(
        "comparison.json",
        "comparison",
        "per-dimension Z-test results",
        &entry,
    )?;
    out.finish()?;
    print!("{table}");
    Ok(())
}
