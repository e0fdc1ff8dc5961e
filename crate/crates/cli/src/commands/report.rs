use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use idsample_core::pca::component_names;
use idsample_core::report::{
    class_colors, emit_scatter_svg, write_point_cloud, PlotKind, PlotSpec,
};
use idsample_core::sampling::{label_distribution, Granularity};
use idsample_core::{explained_variance, fit_pca, project, Dataset, PcaMode, PcaModel};

use super::validate::stem;
use crate::config::{output_dir, CommonArgs, FileConfig, PcaArgs, PcaSettings};
use crate::output::Output;

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Preprocessed dataset CSVs; repeat the flag for each. In shared mode
    /// the first one defines the PCA basis.
    #[arg(long = "input")]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub pca: PcaArgs,
}

/// File-name stems for the inputs, made unique with a numeric suffix.
fn unique_stems(paths: &[PathBuf]) -> Vec<String> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    paths
        .iter()
        .map(|p| {
            let s = stem(p);
            let n = seen.entry(s.clone()).or_default();
            *n += 1;
            if *n == 1 {
                s
            } else {
                format!("{s}-{n}")
            }
        })
        .collect()
}

/// Classes ordered by count, largest first, so the palette is stable.
fn colors_for(ds: &Dataset) -> anyhow::Result<Vec<(String, String)>> {
    let dist = label_distribution(ds, Granularity::TrafficType)?;
    let mut classes: Vec<(&String, &u64)> = dist.counts.iter().collect();
    classes.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    Ok(class_colors(
        classes.iter().map(|(c, _)| c.as_str()),
        &ds.normal_class_names(),
    ))
}

pub fn run(args: &ReportArgs) -> anyhow::Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let inputs = if args.inputs.is_empty() {
        vec![crate::config::input_path(None, &file)?]
    } else {
        args.inputs.clone()
    };
    let pca = PcaSettings::resolve(&args.pca, &file)?;
    let datasets = inputs
        .iter()
        .map(Dataset::read_csv)
        .collect::<idsample_core::Result<Vec<_>>>()?;
    let stems = unique_stems(&inputs);

    let mut out = Output::create(&output_dir(&args.common, &file), "report")?;
    let shared = match pca.mode {
        PcaMode::Shared => {
            let model = fit_pca(&datasets[0], pca.options())?;
            out.with(
                "shared.pca.json",
                "pca_model",
                "basis fitted on the first input",
                |p| model.save_json(p),
            )?;
            Some(model)
        }
        PcaMode::Independent => None,
    };

    let mut summaries = String::new();
    for ((ds, name), path) in datasets.iter().zip(&stems).zip(&inputs) {
        let own: PcaModel;
        let model = match &shared {
            Some(m) => m,
            None => {
                own = fit_pca(ds, pca.options())?;
                out.with(
                    &format!("{name}.pca.json"),
                    "pca_model",
                    &format!("basis fitted on {name}"),
                    |p| own.save_json(p),
                )?;
                &own
            }
        };
        let summary = explained_variance(model, ds)?;
        let _ = writeln!(summaries, "{name}\t{summary}");

        let points = project(model, ds)?;
        let labels: Vec<&str> = ds
            .traffic_type()
            .iter()
            .map(|&t| ds.class_name(t))
            .collect();
        let cloud = format!("{name}.points.csv");
        out.with(
            &cloud,
            "point_cloud",
            &format!(
                "{name} projected onto {}",
                component_names(pca.k).join(", ")
            ),
            |p| write_point_cloud(points.view(), &labels, p),
        )?;
        if pca.k == 3 {
            let spec =
                PlotSpec::new(PlotKind::Scatter3dProjection, &cloud).with_colors(colors_for(ds)?);
            out.with(
                &format!("{name}.scatter.svg"),
                "plot",
                &format!("{name} in PCA space"),
                |p| emit_scatter_svg(points.view(), &labels, &spec, p),
            )?;
        }
        println!("{}: {summary}", path.display());
    }
    out.text(
        "variance.txt",
        "variance_summary",
        "explained variance per input",
        &summaries,
    )?;
    out.finish()?;
    if pca.k != 3 {
        println!("scatter plots need --pca-k 3; skipped");
    }
    Ok(())
}
