//! Synthetic inputs shared by the benchmarks.

use idsample_core::Dataset;
use ndarray::Array2;

/// `rows` x `features` dataset with a skewed class mix over `classes` types.
pub fn synthetic(rows: usize, features: usize, classes: usize) -> Dataset {
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let feats = Array2::from_shape_fn((rows, features), |_| {
        (next() >> 11) as f64 / (1u64 << 53) as f64
    });
    let names: Vec<String> = (0..features).map(|j| format!("f{j}")).collect();
    let types: Vec<String> = (0..rows)
        .map(|i| {
            // class k gets roughly twice as many rows as class k + 1
            let mut k = 0;
            let mut r = i % ((1 << classes) - 1);
            while k + 1 < classes && r >= 1 << (classes - 1 - k) {
                r -= 1 << (classes - 1 - k);
                k += 1;
            }
            format!("class{k}")
        })
        .collect();
    Dataset::from_class_names(feats, names, &types, "class0").expect("valid fixture")
}
