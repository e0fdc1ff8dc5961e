//! Representative and class-balanced sampling for labeled network-traffic
//! datasets, with Z-test and PCA checks of how well a sample represents its
//! source.
//!
//! The pipeline is:
//!
//! 1. [`ingest`]: parse CSV, encode categoricals, drop duplicates and
//!    constant columns.
//! 2. [`sampling`]: draw a representative sample ([`get_sample`]) or a
//!    balanced one ([`get_balanced_sample`]).
//! 3. [`stats`] and [`pca`]: compare a sample to its source feature by
//!    feature, or coordinate by coordinate in PCA space.
//! 4. [`report`]: tables, chart fractions and SVG plots.

pub mod dataset;
pub mod error;
pub mod ingest;
pub mod pca;
pub mod report;
pub mod sampling;
pub mod stats;

pub use dataset::{Dataset, Lineage, LineageStep};
pub use error::{Error, ErrorClass, Result};
pub use pca::{
    compare_pca, explained_variance, fit_pca, project, variance_summary, PcaMode, PcaModel,
    PcaOptions, VarianceSummary,
};
pub use sampling::{
    distribution_similar, get_balanced_sample, get_sample, label_distribution, Granularity,
    LabelDistribution, SampleRecipe, SimilarityVerdict,
};
pub use stats::{compare_all_features, normal_cdf, z_test, SimilarityReport, ZTestResult};
