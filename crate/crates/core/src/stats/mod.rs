//! Two-sample Z-tests and the per-feature dataset comparison.

mod normal;
mod ztest;

pub use normal::{normal_cdf, two_tailed_p};
pub use ztest::{z_test, z_test_moments, Moments, ZTestResult};

use std::fmt;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonMethod {
    AllFeatures,
    Pca,
}

impl fmt::Display for ComparisonMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComparisonMethod::AllFeatures => "all_features",
            ComparisonMethod::Pca => "pca",
        })
    }
}

/// Per-dimension Z-tests and their tally. Two sets are similar only when
/// every dimension is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub method: ComparisonMethod,
    pub alpha: f64,
    pub per_dimension: Vec<ZTestResult>,
    pub n_similar: usize,
    pub n_different: usize,
    pub overall_similar: bool,
    pub summary: String,
}

impl SimilarityReport {
    pub fn new(method: ComparisonMethod, alpha: f64, per_dimension: Vec<ZTestResult>) -> Self {
        let n_similar = per_dimension.iter().filter(|r| r.similar).count();
        let n_different = per_dimension.len() - n_similar;
        Self {
            method,
            alpha,
            summary: format!("{n_similar} similar, {n_different} different"),
            per_dimension,
            n_similar,
            n_different,
            overall_similar: n_different == 0,
        }
    }
}

/// Z-tests column `j` of `a` against column `j` of `b` for every column.
pub(crate) fn compare_columns(
    a: ArrayView2<'_, f64>,
    b: ArrayView2<'_, f64>,
    names: &[String],
    alpha: f64,
) -> Result<Vec<ZTestResult>> {
    names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let ma = Moments::of(a.column(j).iter().copied());
            let mb = Moments::of(b.column(j).iter().copied());
            z_test_moments(ma, mb, name, alpha)
        })
        .collect()
}

/// One Z-test per feature column; label columns are not features.
pub fn compare_all_features(
    ds: &Dataset,
    sample: &Dataset,
    alpha: f64,
) -> Result<SimilarityReport> {
    if ds.feature_names() != sample.feature_names() {
        return Err(Error::FeatureMismatch(format!(
            "dataset has {} features, sample has {}; names differ",
            ds.n_features(),
            sample.n_features()
        )));
    }
    let results = compare_columns(
        ds.features().view(),
        sample.features().view(),
        ds.feature_names(),
        alpha,
    )?;
    Ok(SimilarityReport::new(
        ComparisonMethod::AllFeatures,
        alpha,
        results,
    ))
}
