//! Principal component analysis on the mean-centered covariance matrix, and
//! the Z-test comparison of two datasets in PCA coordinates.

pub mod jacobi;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::stats::{compare_columns, ComparisonMethod, Moments, SimilarityReport};

pub use jacobi::{symmetric_eigen, SymmetricEigen};

/// Number of leading components used by default.
pub const DEFAULT_COMPONENTS: usize = 3;

const CHUNK_ROWS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcaOptions {
    pub k: usize,
    /// Divide each centered feature by its standard deviation before the
    /// decomposition.
    pub standardize: bool,
}

impl Default for PcaOptions {
    fn default() -> Self {
        Self {
            k: DEFAULT_COMPONENTS,
            standardize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub k: usize,
    pub feature_names: Vec<String>,
    pub mean: Vec<f64>,
    /// Per-feature divisor applied after centering; `None` when not
    /// standardized.
    pub scale: Option<Vec<f64>>,
    /// `k x d`, orthonormal rows ordered by descending eigenvalue.
    #[serde(with = "matrix_rows")]
    pub components: Array2<f64>,
    pub eigenvalues: Vec<f64>,
    /// All `d` covariance eigenvalues, descending.
    pub spectrum: Vec<f64>,
    /// Trace of the covariance matrix.
    pub total_variance: f64,
}

/// Explained variance ratios. `cumulative` holds running sums of
/// `per_dim_ratio`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceSummary {
    pub per_dim_ratio: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub accumulative_variance: f64,
}

impl fmt::Display for VarianceSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:.8}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "Per-dim Var=[{}] Cumulative Var=[{}] Acc Var={}",
            join(&self.per_dim_ratio),
            join(&self.cumulative),
            self.accumulative_variance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcaMode {
    /// Fit on the reference dataset and project both sets onto that basis.
    #[default]
    Shared,
    /// Fit each set separately and project it onto its own basis.
    Independent,
}

impl FromStr for PcaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shared" => Ok(PcaMode::Shared),
            "independent" => Ok(PcaMode::Independent),
            other => Err(Error::InvalidArgument(format!(
                "unknown PCA mode `{other}`"
            ))),
        }
    }
}

impl fmt::Display for PcaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PcaMode::Shared => "shared",
            PcaMode::Independent => "independent",
        })
    }
}

/// Sample covariance (divisor `n - 1`) accumulated in row chunks.
pub fn covariance(data: ArrayView2<'_, f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let (n, d) = data.dim();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "covariance needs at least 2 rows, got {n}"
        )));
    }
    let mean = data.mean_axis(Axis(0)).expect("non-empty data has a mean");
    let mut cov = Array2::<f64>::zeros((d, d));
    for chunk in data.axis_chunks_iter(Axis(0), CHUNK_ROWS) {
        let centered = &chunk - &mean;
        cov += &centered.t().dot(&centered);
    }
    cov /= (n - 1) as f64;
    Ok((mean, cov))
}

/// Fits a `k`-component model to the features of `ds`.
pub fn fit_pca(ds: &Dataset, options: PcaOptions) -> Result<PcaModel> {
    fit_matrix(ds.features().view(), ds.feature_names(), options)
}

pub fn fit_matrix(
    data: ArrayView2<'_, f64>,
    feature_names: &[String],
    options: PcaOptions,
) -> Result<PcaModel> {
    let (n, d) = data.dim();
    if options.k == 0 || options.k > d {
        return Err(Error::InvalidArgument(format!(
            "k = {} must be in 1..={d}",
            options.k
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "PCA needs at least 2 rows, got {n}"
        )));
    }
    let (mean, mut cov) = covariance(data)?;
    let scale = options.standardize.then(|| {
        let s: Vec<f64> = (0..d)
            .map(|i| {
                let sd = cov[[i, i]].sqrt();
                if sd > 0.0 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        for i in 0..d {
            for j in 0..d {
                cov[[i, j]] /= s[i] * s[j];
            }
        }
        s
    });
    let total_variance = cov.diag().sum();
    let eig = symmetric_eigen(&cov)?;

    let mut vectors: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut v = eig.vectors.column(i).to_vec();
            orient(&mut v);
            v
        })
        .collect();
    let values: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0)).collect();
    let order = component_order(&values, &vectors, total_variance);

    let spectrum: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut components = Array2::<f64>::zeros((options.k, d));
    for (row, &i) in order.iter().take(options.k).enumerate() {
        let v = std::mem::take(&mut vectors[i]);
        components.row_mut(row).assign(&Array1::from(v));
    }
    Ok(PcaModel {
        k: options.k,
        feature_names: feature_names.to_vec(),
        mean: mean.to_vec(),
        scale,
        components,
        eigenvalues: spectrum[..options.k].to_vec(),
        spectrum,
        total_variance,
    })
}

/// Index of the largest-magnitude entry, lowest index on ties.
fn dominant_index(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

/// Flips `v` so its largest-magnitude entry is positive.
fn orient(v: &mut [f64]) {
    if v[dominant_index(v)] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Descending eigenvalue order; runs of eigenvalues within
/// `1e-12 * total_variance` of each other are ordered by the index of each
/// vector's dominant entry.
fn component_order(values: &[f64], vectors: &[Vec<f64>], total_variance: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let tie = 1e-12 * total_variance;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end - 1]] - values[order[end]] <= tie {
            end += 1;
        }
        order[start..end].sort_by_key(|&i| (dominant_index(&vectors[i]), i));
        start = end;
    }
    order
}

impl PcaModel {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Maps each row `x` to `components · ((x - mean) / scale)`.
    pub fn project_matrix(&self, data: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if data.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: data.ncols(),
            });
        }
        let mean = Array1::from(self.mean.clone());
        let scale = self.scale.clone().map(Array1::from);
        let basis = self.components.t();
        let mut out = Array2::<f64>::zeros((data.nrows(), self.k));
        for (chunk, mut dst) in data
            .axis_chunks_iter(Axis(0), CHUNK_ROWS)
            .zip(out.axis_chunks_iter_mut(Axis(0), CHUNK_ROWS))
        {
            let mut centered = &chunk - &mean;
            if let Some(s) = &scale {
                centered /= s;
            }
            dst.assign(&centered.dot(&basis));
        }
        Ok(out)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}

pub fn project(model: &PcaModel, ds: &Dataset) -> Result<Array2<f64>> {
    model.project_matrix(ds.features().view())
}

pub fn variance_summary(model: &PcaModel) -> VarianceSummary {
    ratios(&model.eigenvalues, model.total_variance)
}

/// Share of `ds`'s own total variance captured by each of `model`'s
/// components. Equals [`variance_summary`] when `ds` is the data `model` was
/// fitted on; useful when one basis is shared by several datasets.
pub fn explained_variance(model: &PcaModel, ds: &Dataset) -> Result<VarianceSummary> {
    if ds.n_rows() < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 rows, got {}",
            ds.n_rows()
        )));
    }
    let projected = project(model, ds)?;
    let along: Vec<f64> = projected
        .columns()
        .into_iter()
        .map(|c| Moments::of(c.iter().copied()).variance)
        .collect();
    let total = ds
        .features()
        .columns()
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            let s = model.scale.as_ref().map_or(1.0, |s| s[j]);
            Moments::of(c.iter().copied()).variance / (s * s)
        })
        .sum();
    Ok(ratios(&along, total))
}

fn ratios(variances: &[f64], total: f64) -> VarianceSummary {
    let per_dim_ratio: Vec<f64> = if total > 0.0 {
        variances.iter().map(|v| v / total).collect()
    } else {
        vec![0.0; variances.len()]
    };
    let cumulative: Vec<f64> = per_dim_ratio
        .iter()
        .scan(0.0, |acc, r| {
            *acc += r;
            Some(*acc)
        })
        .collect();
    VarianceSummary {
        accumulative_variance: cumulative.last().copied().unwrap_or(0.0),
        per_dim_ratio,
        cumulative,
    }
}

/// Names of the projected coordinates: `pc1..pck`.
pub fn component_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("pc{i}")).collect()
}

/// Z-tests each PCA coordinate of `sample` against `ds`.
pub fn compare_pca(
    ds: &Dataset,
    sample: &Dataset,
    options: PcaOptions,
    alpha: f64,
    mode: PcaMode,
) -> Result<SimilarityReport> {
    if ds.feature_names() != sample.feature_names() {
        return Err(Error::FeatureMismatch(format!(
            "dataset has {} features, sample has {}; names differ",
            ds.n_features(),
            sample.n_features()
        )));
    }
    let (a, b) = match mode {
        PcaMode::Shared => {
            let model = fit_pca(ds, options)?;
            (project(&model, ds)?, project(&model, sample)?)
        }
        PcaMode::Independent => {
            let own = fit_pca(ds, options)?;
            let theirs = fit_pca(sample, options)?;
            (project(&own, ds)?, project(&theirs, sample)?)
        }
    };
    let results = compare_columns(a.view(), b.view(), &component_names(options.k), alpha)?;
    Ok(SimilarityReport::new(ComparisonMethod::Pca, alpha, results))
}

mod matrix_rows {
    use ndarray::Array2;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Array2<f64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = m.outer_iter().map(|r| r.to_vec()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Array2<f64>, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Array2::from_shape_vec((rows.len(), cols), flat).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn names(d: usize) -> Vec<String> {
        (0..d).map(|i| format!("f{i}")).collect()
    }

    /// Points (±a, 0), (0, ±b) have mean 0 and sample covariance
    /// diag(2a²/3, 2b²/3); a = √6, b = √1.5 gives diag(4, 1).
    fn diag_4_1() -> Array2<f64> {
        let a = 6f64.sqrt();
        let b = 1.5f64.sqrt();
        array![[a, 0.0], [-a, 0.0], [0.0, b], [0.0, -b]]
    }

    #[test]
    fn constructed_covariance_ratios() {
        let m = fit_matrix(
            diag_4_1().view(),
            &names(2),
            PcaOptions {
                k: 2,
                standardize: false,
            },
        )
        .unwrap();
        assert!((m.eigenvalues[0] - 4.0).abs() < 1e-12);
        assert!((m.eigenvalues[1] - 1.0).abs() < 1e-12);
        let s = variance_summary(&m);
        assert!((s.per_dim_ratio[0] - 0.8).abs() < 1e-12);
        assert!((s.per_dim_ratio[1] - 0.2).abs() < 1e-12);
        assert!((s.cumulative[1] - 1.0).abs() < 1e-12);
        // PC1 is the x-axis, oriented positive.
        let p = m.project_matrix(array![[2.0, 0.0]].view()).unwrap();
        assert!((p[[0, 0]] - 2.0).abs() < 1e-12 && p[[0, 1]].abs() < 1e-12);
    }

    #[test]
    fn identical_rows_have_zero_ratios() {
        let data = array![[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [1.0, 2.0, 3.0]];
        let m = fit_matrix(data.view(), &names(3), PcaOptions::default()).unwrap();
        assert_eq!(m.total_variance, 0.0);
        assert!(m.eigenvalues.iter().all(|&v| v == 0.0));
        let s = variance_summary(&m);
        assert_eq!(s.per_dim_ratio, vec![0.0; 3]);
        assert_eq!(s.accumulative_variance, 0.0);
    }

    #[test]
    fn equal_eigenvalues_split_evenly() {
        let m = PcaModel {
            k: 3,
            feature_names: names(3),
            mean: vec![0.0; 3],
            scale: None,
            components: Array2::eye(3),
            eigenvalues: vec![1.0; 3],
            spectrum: vec![1.0; 3],
            total_variance: 3.0,
        };
        let s = variance_summary(&m);
        for (got, want) in s.cumulative.iter().zip([1.0 / 3.0, 2.0 / 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_spectrum_orders_by_axis() {
        // Isotropic 2-D data: both eigenvalues equal, basis follows the axes.
        let data = array![[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
        let m = fit_matrix(
            data.view(),
            &names(2),
            PcaOptions {
                k: 2,
                standardize: false,
            },
        )
        .unwrap();
        assert_eq!(m.components, array![[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn mean_maps_to_origin() {
        let data = array![
            [1.0, 5.0, 2.0],
            [3.0, 1.0, 0.0],
            [2.0, 2.0, 7.0],
            [0.0, 4.0, 1.0]
        ];
        let m = fit_matrix(data.view(), &names(3), PcaOptions::default()).unwrap();
        let mean = Array2::from_shape_vec((1, 3), m.mean.clone()).unwrap();
        let p = m.project_matrix(mean.view()).unwrap();
        assert!(p.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn bad_k_rejected() {
        let data = diag_4_1();
        assert!(fit_matrix(
            data.view(),
            &names(2),
            PcaOptions {
                k: 3,
                standardize: false
            }
        )
        .is_err());
        assert!(fit_matrix(
            data.view(),
            &names(2),
            PcaOptions {
                k: 0,
                standardize: false
            }
        )
        .is_err());
        let one = array![[1.0, 2.0]];
        assert!(fit_matrix(
            one.view(),
            &names(2),
            PcaOptions {
                k: 1,
                standardize: false
            }
        )
        .is_err());
    }

    #[test]
    fn standardized_total_variance_counts_features() {
        let data = array![[1.0, 100.0], [2.0, 300.0], [4.0, 200.0], [3.0, 0.0]];
        let m = fit_matrix(
            data.view(),
            &names(2),
            PcaOptions {
                k: 2,
                standardize: true,
            },
        )
        .unwrap();
        assert!((m.total_variance - 2.0).abs() < 1e-12);
    }

    #[test]
    fn model_json_round_trip() {
        let m = fit_matrix(
            diag_4_1().view(),
            &names(2),
            PcaOptions {
                k: 1,
                standardize: false,
            },
        )
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: PcaModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn explained_variance_matches_own_fit() {
        let data = array![
            [1.0, 2.0, 0.5],
            [2.0, 1.0, 0.0],
            [4.0, 3.0, 1.5],
            [3.0, 0.0, 2.0],
            [0.0, 1.0, 1.0]
        ];
        let ds = Dataset::from_class_names(data.clone(), names(3), &["a", "b", "a", "b", "a"], "a")
            .unwrap();
        for standardize in [false, true] {
            let m = fit_matrix(data.view(), &names(3), PcaOptions { k: 2, standardize }).unwrap();
            let own = variance_summary(&m);
            let via = explained_variance(&m, &ds).unwrap();
            for (a, b) in own.per_dim_ratio.iter().zip(&via.per_dim_ratio) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }
}
