//! Tables, chart data and plots for distributions, comparisons and PCA
//! projections.

mod format;
mod plots;
mod tables;

pub use format::{format_proportion, format_significant};
pub use plots::{
    class_colors, emit_pie_fractions, emit_scatter_svg, pie_fractions, pie_fractions_csv,
    render_pie_svg, render_scatter_svg, write_point_cloud, PlotKind, PlotSpec, MAX_MARKERS,
    NORMAL_COLOR,
};
pub use tables::{
    render_comparison_table, render_distribution_table, verdict_cell, ComparisonEntry,
    DistributionRow, DistributionTable,
};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub kind: String,
    /// Relative to the index file.
    pub path: String,
    pub description: String,
}

/// JSON index of every artifact written by one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ArtifactIndex {
    pub command: String,
    pub artifacts: Vec<Artifact>,
}

impl ArtifactIndex {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            artifacts: Vec::new(),
        }
    }

    pub fn add(&mut self, kind: &str, path: &str, description: impl Into<String>) {
        self.artifacts.push(Artifact {
            kind: kind.to_owned(),
            path: path.to_owned(),
            description: description.into(),
        });
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)? + "\n";
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}
