use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::format::format_proportion;
use crate::sampling::LabelDistribution;
use crate::stats::SimilarityReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub class_name: String,
    pub count: u64,
    pub proportion: f64,
}

/// Class counts and proportions, largest class first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub title: String,
    pub rows: Vec<DistributionRow>,
    pub total: u64,
}

impl DistributionTable {
    /// CSV with header `class,count,proportion` and a trailing `Total` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,count,proportion\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{}",
                csv_field(&r.class_name),
                r.count,
                format_proportion(r.proportion)
            );
        }
        let _ = writeln!(out, "Total,{},", self.total);
        out
    }
}

impl fmt::Display for DistributionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        writeln!(f, "Traffic Type\tcount\t%")?;
        for r in &self.rows {
            writeln!(
                f,
                "{}\t{}\t{}",
                r.class_name,
                r.count,
                format_proportion(r.proportion)
            )?;
        }
        writeln!(f, "Total\t{}", self.total)
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Sorts a distribution into a table (count descending, then name).
/// `display_name` maps class keys to printed names, e.g. `"0"` to `normal`.
pub fn render_distribution_table(
    dist: &LabelDistribution,
    display_name: impl Fn(&str) -> String,
    title: &str,
) -> DistributionTable {
    let mut rows: Vec<DistributionRow> = dist
        .counts
        .iter()
        .map(|(class, &count)| DistributionRow {
            class_name: display_name(class),
            count,
            proportion: dist.proportion(class),
        })
        .collect();
    rows.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.class_name.cmp(&b.class_name))
    });
    DistributionTable {
        title: title.to_owned(),
        rows,
        total: dist.total,
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub dataset: String,
    pub sample: String,
    pub features: SimilarityReport,
    pub pca: SimilarityReport,
}

/// `similar`, or `N similar, M different features`.
pub fn verdict_cell(report: &SimilarityReport) -> String {
    if report.overall_similar {
        "similar".to_owned()
    } else {
        format!(
            "{} similar, {} different features",
            report.n_similar, report.n_different
        )
    }
}

/// Tab-separated table with one row per (dataset, sample) pair.
pub fn render_comparison_table(entries: &[ComparisonEntry]) -> String {
    let mut out = String::from("Dataset\tSample\tFeatures\tPCA\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            e.dataset,
            e.sample,
            verdict_cell(&e.features),
            verdict_cell(&e.pca)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Granularity;
    use crate::stats::{z_test, ComparisonMethod};

    fn dist(pairs: &[(&str, u64)]) -> LabelDistribution {
        LabelDistribution::from_counts(
            Granularity::TrafficType,
            pairs.iter().map(|&(k, c)| (k.to_owned(), c)),
        )
        .unwrap()
    }

    #[test]
    fn rows_sorted_by_count_then_name() {
        let t = render_distribution_table(
            &dist(&[("b", 5), ("a", 5), ("Normal.", 87832), ("z", 9)]),
            str::to_owned,
            "t",
        );
        let names: Vec<&str> = t.rows.iter().map(|r| r.class_name.as_str()).collect();
        assert_eq!(names, ["Normal.", "z", "a", "b"]);
        assert_eq!(t.total, 87851);
    }

    #[test]
    fn balanced_half_prints_exactly() {
        let t = render_distribution_table(
            &dist(&[
                ("Normal", 477),
                ("TCP", 235),
                ("UDP", 232),
                ("Service Scan", 10),
            ]),
            str::to_owned,
            "balanced",
        );
        assert_eq!(t.rows[0].class_name, "Normal");
        assert!(t.to_csv().contains("Normal,477,0.5\n"));
        assert!(t.to_csv().ends_with("Total,954,\n"));
    }

    #[test]
    fn single_class() {
        let t = render_distribution_table(&dist(&[("x", 10)]), str::to_owned, "one");
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].proportion, 1.0);
    }

    fn report(similar: usize, different: usize) -> SimilarityReport {
        let same = z_test(&[1.0, 2.0], &[1.0, 2.0], "s", 0.05).unwrap();
        let diff = z_test(&[0.0, 0.0], &[1.0, 1.0], "d", 0.05).unwrap();
        let mut rows = vec![same; similar];
        rows.extend(std::iter::repeat_n(diff, different));
        SimilarityReport::new(ComparisonMethod::AllFeatures, 0.05, rows)
    }

    #[test]
    fn comparison_cells() {
        let entries = vec![
            ComparisonEntry {
                dataset: "NSL".into(),
                sample: "50%".into(),
                features: report(3, 0),
                pca: report(3, 0),
            },
            ComparisonEntry {
                dataset: "NSL".into(),
                sample: "Balanced DS".into(),
                features: report(13, 27),
                pca: report(3, 0),
            },
        ];
        let text = render_comparison_table(&entries);
        assert_eq!(
            text,
            "Dataset\tSample\tFeatures\tPCA\n\
             NSL\t50%\tsimilar\tsimilar\n\
             NSL\tBalanced DS\t13 similar, 27 different features\tsimilar\n"
        );
        assert_eq!(
            render_comparison_table(&[]),
            "Dataset\tSample\tFeatures\tPCA\n"
        );
    }
}
