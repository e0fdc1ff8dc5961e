use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use crate::dataset::{Dataset, LineageStep};
use crate::error::{Error, Result};

/// Borrowed row key; floats compare by value, so `-0.0 == 0.0`.
struct RowKey<'a> {
    features: &'a [f64],
    label: u8,
    traffic_type: u32,
}

impl Hash for RowKey<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for v in self.features {
            // Adding +0.0 maps -0.0 to +0.0 so equal values hash equally.
            (v + 0.0).to_bits().hash(state);
        }
        self.label.hash(state);
        self.traffic_type.hash(state);
    }
}

impl PartialEq for RowKey<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.traffic_type == other.traffic_type
            && self.features == other.features
    }
}

impl Eq for RowKey<'_> {}

/// Keeps the first occurrence of each distinct (features, label, type) row.
pub fn dedup(ds: &Dataset) -> Dataset {
    let features = ds.features();
    let slice = features
        .as_slice()
        .expect("dataset features are in standard layout");
    let width = ds.n_features();
    let mut seen = HashSet::with_capacity(ds.n_rows());
    let mut keep = Vec::with_capacity(ds.n_rows());
    for i in 0..ds.n_rows() {
        let key = RowKey {
            features: &slice[i * width..(i + 1) * width],
            label: ds.binary_label()[i],
            traffic_type: ds.traffic_type()[i],
        };
        if seen.insert(key) {
            keep.push(i);
        }
    }
    let removed = ds.n_rows() - keep.len();
    let out = if removed == 0 {
        ds.clone()
    } else {
        ds.select_rows(&keep)
    };
    out.with_step(LineageStep::Deduplicated { removed })
}

/// Removes every feature column whose values are all identical.
pub fn drop_constant_columns(ds: &Dataset) -> Result<Dataset> {
    let features = ds.features();
    let (keep, dropped): (Vec<usize>, Vec<usize>) = (0..ds.n_features()).partition(|&c| {
        let col = features.column(c);
        match col.first() {
            Some(first) => col.iter().any(|v| v != first),
            None => false,
        }
    });
    if keep.is_empty() {
        return Err(Error::NoInformativeFeatures);
    }
    let columns = dropped
        .iter()
        .map(|&c| ds.feature_names()[c].clone())
        .collect();
    let out = if dropped.is_empty() {
        ds.clone()
    } else {
        ds.select_columns(&keep)
    };
    Ok(out.with_step(LineageStep::DroppedConstant { columns }))
}
