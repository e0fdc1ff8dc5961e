use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use idsample_core::report::{
    emit_pie_fractions, render_distribution_table, render_pie_svg, PlotKind, PlotSpec,
};
use idsample_core::sampling::{label_distribution, Granularity};
use idsample_core::{get_balanced_sample, get_sample, Dataset, SimilarityVerdict};
use serde::Serialize;

use crate::config::{
    input_path, output_dir, CommonArgs, FileConfig, SampleArgs, SampleSettings, SampleSize,
};
use crate::output::Output;

#[derive(Debug, Args)]
pub struct SampleCmdArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Preprocessed dataset CSV.
    #[arg(long, env = "IDSAMPLE_INPUT")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub sample: SampleArgs,
}

#[derive(Serialize)]
struct VerdictFile<'a> {
    rows_in: usize,
    rows_out: usize,
    attempts: u32,
    /// Absent when too few classes remain after pooling to run the test.
    verdict: Option<&'a SimilarityVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minority_label: Option<Option<u8>>,
}

fn binary_name(key: &str) -> String {
    match key {
        "0" => "normal".to_owned(),
        "1" => "attack".to_owned(),
        other => other.to_owned(),
    }
}

/// Distribution tables at both granularities plus pie-chart fractions and
/// SVGs for one dataset.
fn emit_distributions(
    out: &mut Output,
    stem: &str,
    title: &str,
    ds: &Dataset,
) -> anyhow::Result<()> {
    let traffic = label_distribution(ds, Granularity::TrafficType)?;
    let binary = label_distribution(ds, Granularity::Binary)?;
    let table = render_distribution_table(&traffic, str::to_owned, title);
    out.text(
        &format!("{stem}.distribution.csv"),
        "distribution_table",
        &format!("{title}: traffic type counts"),
        &table.to_csv(),
    )?;
    let table = render_distribution_table(&binary, binary_name, title);
    out.text(
        &format!("{stem}.binary.csv"),
        "distribution_table",
        &format!("{title}: normal versus attack counts"),
        &table.to_csv(),
    )?;
    let normal = ds.normal_class_names();
    let pie_name = format!("{stem}.pie.csv");
    let mut rows = Vec::new();
    out.with(
        &pie_name,
        "pie_fractions",
        &format!("{title}: pie chart fractions"),
        |p| {
            rows = emit_pie_fractions(&traffic, str::to_owned, &normal, p)?;
            Ok(())
        },
    )?;
    let spec = PlotSpec::new(PlotKind::Pie, &pie_name);
    out.text(
        &format!("{stem}.pie.svg"),
        "plot",
        &format!("{title}: pie chart"),
        &render_pie_svg(&rows, &spec),
    )?;
    Ok(())
}

fn provenance(
    command: &str,
    input: &Path,
    settings: &SampleSettings,
    rows_out: usize,
    attempts: u32,
    verdict: Option<&SimilarityVerdict>,
    lineage: &str,
) -> String {
    let r = &settings.recipe;
    let mut s = String::new();
    let _ = writeln!(s, "command={command}");
    let _ = writeln!(s, "input={}", input.display());
    let _ = writeln!(s, "seed={}", r.seed);
    match settings.size {
        SampleSize::Fraction(f) => {
            let _ = writeln!(s, "fraction={f}");
        }
        SampleSize::Num(n) => {
            let _ = writeln!(s, "num_requested={n}");
        }
    }
    let _ = writeln!(s, "rows={rows_out}");
    let _ = writeln!(s, "alpha={}", r.similarity_alpha);
    let _ = writeln!(s, "min_expected_count={}", r.min_expected_count);
    let _ = writeln!(s, "max_attempts={}", r.max_attempts);
    let _ = writeln!(s, "attempts={attempts}");
    match verdict {
        Some(v) => {
            let _ = writeln!(s, "statistic={}", v.statistic);
            let _ = writeln!(s, "threshold={}", v.threshold);
            let _ = writeln!(s, "degrees_of_freedom={}", v.degrees_of_freedom);
            let _ = writeln!(s, "similar={}", v.similar);
        }
        None => {
            let _ = writeln!(s, "statistic=undecidable");
        }
    }
    s.push_str("\n# lineage\n");
    s.push_str(lineage);
    s
}

pub fn run_sample(args: &SampleCmdArgs) -> anyhow::Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let input = input_path(args.input.as_ref(), &file)?;
    let settings = SampleSettings::resolve(&args.sample, &file)?;
    let ds = Dataset::read_csv(&input)?;
    let num = settings.size.resolve(ds.n_rows());
    let outcome = get_sample(&ds, num, &settings.recipe)?;

    let mut out = Output::create(&output_dir(&args.common, &file), "sample")?;
    out.with("sample.csv", "dataset", "representative sample", |p| {
        outcome.dataset.write_csv(p)
    })?;
    out.text(
        "sample.provenance.txt",
        "provenance",
        "settings and outcome that reproduce sample.csv",
        &provenance(
            "sample",
            &input,
            &settings,
            num,
            outcome.attempts,
            outcome.verdict.as_ref(),
            &outcome.dataset.lineage().to_string(),
        ),
    )?;
    out.json(
        "verdict.json",
        "verdict",
        "chi-square similarity of the sample to its input",
        &VerdictFile {
            rows_in: ds.n_rows(),
            rows_out: num,
            attempts: outcome.attempts,
            verdict: outcome.verdict.as_ref(),
            minority_label: None,
        },
    )?;
    emit_distributions(&mut out, "original", "Original", &ds)?;
    emit_distributions(&mut out, "sample", "Sample", &outcome.dataset)?;
    out.finish()?;

    print!(
        "{num} of {} rows sampled in {} attempt(s)",
        ds.n_rows(),
        outcome.attempts
    );
    match &outcome.verdict {
        Some(v) => println!(", chi-square {:.6} <= {:.6}", v.statistic, v.threshold),
        None => println!(", similarity undecidable"),
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Preprocessed dataset CSV.
    #[arg(long, env = "IDSAMPLE_INPUT")]
    pub input: Option<PathBuf>,
    /// Seed for sampling the majority class.
    #[arg(long, env = "IDSAMPLE_SEED")]
    pub seed: Option<u64>,
    /// Significance level of the chi-square similarity check. Default 0.05.
    #[arg(long, env = "IDSAMPLE_ALPHA")]
    pub alpha: Option<f64>,
    /// Permutations tried before giving up. Default 100.
    #[arg(long, env = "IDSAMPLE_MAX_ATTEMPTS")]
    pub max_attempts: Option<u32>,
}

pub fn run_balance(args: &BalanceArgs) -> anyhow::Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let input = input_path(args.input.as_ref(), &file)?;
    let sample_args = SampleArgs {
        seed: args.seed,
        fraction: None,
        num: None,
        alpha: args.alpha,
        max_attempts: args.max_attempts,
    };
    let mut settings = SampleSettings::resolve(&sample_args, &file)?;
    let ds = Dataset::read_csv(&input)?;
    let outcome = get_balanced_sample(&ds, &settings.recipe)?;
    let rows = outcome.dataset.n_rows();
    settings.size = SampleSize::Num(rows);

    let mut out = Output::create(&output_dir(&args.common, &file), "balance")?;
    out.with("balanced.csv", "dataset", "class-balanced sample", |p| {
        outcome.dataset.write_csv(p)
    })?;
    out.text(
        "balanced.provenance.txt",
        "provenance",
        "settings and outcome that reproduce balanced.csv",
        &provenance(
            "balance",
            &input,
            &settings,
            rows,
            outcome.attempts,
            outcome.verdict.as_ref(),
            &outcome.dataset.lineage().to_string(),
        ),
    )?;
    out.json(
        "verdict.json",
        "verdict",
        "chi-square similarity of the sampled majority side to the full majority class",
        &VerdictFile {
            rows_in: ds.n_rows(),
            rows_out: rows,
            attempts: outcome.attempts,
            verdict: outcome.verdict.as_ref(),
            minority_label: Some(outcome.minority_label),
        },
    )?;
    emit_distributions(&mut out, "original", "Original", &ds)?;
    emit_distributions(&mut out, "balanced", "Balanced", &outcome.dataset)?;
    out.finish()?;

    match outcome.minority_label {
        Some(label) => println!(
            "{rows} rows: all {} rows of minority label {label} plus {} sampled in {} attempt(s)",
            outcome.minority_count, outcome.minority_count, outcome.attempts
        ),
        None => println!("{rows} rows: binary classes already balanced, returned unchanged"),
    }
    Ok(())
}
