use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::recipe::SampleRecipe;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    /// Normal (`0`) versus attack (`1`).
    Binary,
    TrafficType,
}

/// Class counts and proportions, keyed by class name. Binary classes are
/// named `"0"` and `"1"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelDistribution {
    pub granularity: Granularity,
    pub counts: BTreeMap<String, u64>,
    pub proportions: BTreeMap<String, f64>,
    pub total: u64,
}

impl LabelDistribution {
    /// Builds a distribution from counts; zero counts are discarded.
    pub fn from_counts(
        granularity: Granularity,
        counts: impl IntoIterator<Item = (String, u64)>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<String, u64> = BTreeMap::new();
        for (name, c) in counts {
            if c > 0 {
                *merged.entry(name).or_default() += c;
            }
        }
        let total: u64 = merged.values().sum();
        if total == 0 {
            return Err(Error::EmptyDataset);
        }
        let proportions = merged
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / total as f64))
            .collect();
        Ok(Self {
            granularity,
            counts: merged,
            proportions,
            total,
        })
    }

    pub fn count(&self, class: &str) -> u64 {
        self.counts.get(class).copied().unwrap_or(0)
    }

    pub fn proportion(&self, class: &str) -> f64 {
        self.proportions.get(class).copied().unwrap_or(0.0)
    }
}

/// Per-class counts of `rows` (all rows when `None`) indexed by class id.
pub(crate) fn class_counts(ds: &Dataset, rows: Option<&[usize]>) -> Vec<u64> {
    let mut counts = vec![0u64; ds.class_names().len()];
    let types = ds.traffic_type();
    match rows {
        Some(rows) => rows.iter().for_each(|&r| counts[types[r] as usize] += 1),
        None => types.iter().for_each(|&t| counts[t as usize] += 1),
    }
    counts
}

pub(crate) fn traffic_distribution(ds: &Dataset, counts: &[u64]) -> Result<LabelDistribution> {
    LabelDistribution::from_counts(
        Granularity::TrafficType,
        ds.class_names().iter().cloned().zip(counts.iter().copied()),
    )
}

pub fn label_distribution(ds: &Dataset, granularity: Granularity) -> Result<LabelDistribution> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    match granularity {
        Granularity::TrafficType => traffic_distribution(ds, &class_counts(ds, None)),
        Granularity::Binary => {
            let mut counts = [0u64; 2];
            for &l in ds.binary_label() {
                counts[l as usize] += 1;
            }
            LabelDistribution::from_counts(
                Granularity::Binary,
                [("0".to_owned(), counts[0]), ("1".to_owned(), counts[1])],
            )
        }
    }
}

/// Outcome of the chi-square goodness-of-fit check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityVerdict {
    /// Infinite when the candidate holds classes the reference lacks.
    pub statistic: f64,
    pub threshold: f64,
    pub degrees_of_freedom: usize,
    pub merged_classes: Vec<String>,
    pub unexpected_classes: Vec<String>,
    pub similar: bool,
}

/// Upper critical value of the chi-square distribution.
pub fn chi_square_critical(degrees_of_freedom: usize, alpha: f64) -> Result<f64> {
    let dist = ChiSquared::new(degrees_of_freedom as f64)
        .map_err(|e| Error::Numerical(format!("chi-square({degrees_of_freedom}): {e}")))?;
    Ok(dist.inverse_cdf(1.0 - alpha))
}

/// Tests whether `candidate` counts are consistent with `reference`
/// proportions.
///
/// Expected counts are `candidate.total * reference.proportion`, evaluated
/// as `total * count / reference_total` so exact proportions give exactly 0. Classes
/// expecting fewer than `recipe.min_expected_count` rows are pooled into a
/// single bucket; similarity holds when the statistic does not exceed the
/// `1 - alpha` quantile with `buckets - 1` degrees of freedom.
pub fn distribution_similar(
    reference: &LabelDistribution,
    candidate: &LabelDistribution,
    recipe: &SampleRecipe,
) -> Result<SimilarityVerdict> {
    recipe.validate()?;
    if reference.granularity != candidate.granularity {
        return Err(Error::InvalidArgument(
            "distributions have different granularity".into(),
        ));
    }
    let n = candidate.total as f64;
    let mut statistic = 0.0;
    let mut buckets = 0usize;
    let mut pooled_expected = 0.0;
    let mut pooled_observed = 0.0;
    let mut merged_classes = Vec::new();
    let reference_total = reference.total as f64;
    for (class, &count) in &reference.counts {
        let expected = n * count as f64 / reference_total;
        let observed = candidate.count(class) as f64;
        if expected < recipe.min_expected_count {
            pooled_expected += expected;
            pooled_observed += observed;
            merged_classes.push(class.clone());
        } else {
            statistic += (observed - expected).powi(2) / expected;
            buckets += 1;
        }
    }
    if !merged_classes.is_empty() {
        statistic += (pooled_observed - pooled_expected).powi(2) / pooled_expected;
        buckets += 1;
    }
    if buckets < 2 {
        return Err(Error::SimilarityUndecidable { buckets });
    }
    let unexpected_classes: Vec<String> = candidate
        .counts
        .keys()
        .filter(|c| !reference.counts.contains_key(*c))
        .cloned()
        .collect();
    if !unexpected_classes.is_empty() {
        statistic = f64::INFINITY;
    }
    let degrees_of_freedom = buckets - 1;
    let threshold = chi_square_critical(degrees_of_freedom, recipe.similarity_alpha)?;
    Ok(SimilarityVerdict {
        statistic,
        threshold,
        degrees_of_freedom,
        merged_classes,
        unexpected_classes,
        similar: statistic <= threshold,
    })
}
