use serde::{Deserialize, Serialize};

use super::normal::two_tailed_p;
use crate::error::{Error, Result};

/// Count, mean and sample variance (divisor `n - 1`) of a vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
}

impl Moments {
    /// Corrected two-pass estimate.
    pub fn of<I>(values: I) -> Self
    where
        I: IntoIterator<Item = f64>,
        I::IntoIter: Clone,
    {
        let iter = values.into_iter();
        let (n, sum) = iter.clone().fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
        if n == 0 {
            return Self {
                n,
                mean: f64::NAN,
                variance: f64::NAN,
            };
        }
        let mean = sum / n as f64;
        let (sq, comp) = iter.fold((0.0, 0.0), |(sq, c), v| {
            let d = v - mean;
            (sq + d * d, c + d)
        });
        let variance = if n > 1 {
            ((sq - comp * comp / n as f64) / (n - 1) as f64).max(0.0)
        } else {
            0.0
        };
        Self { n, mean, variance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZTestResult {
    pub dimension_name: String,
    pub mean_a: f64,
    pub mean_b: f64,
    pub variance_a: f64,
    pub variance_b: f64,
    pub n_a: usize,
    pub n_b: usize,
    /// `±inf` when both variances are zero and the means differ.
    pub z_statistic: f64,
    pub p_value: f64,
    pub similar: bool,
}

/// Two-sample Z-test of equal means (hypothesized difference zero),
/// two-tailed.
pub fn z_test(a: &[f64], b: &[f64], dimension_name: &str, alpha: f64) -> Result<ZTestResult> {
    let ma = Moments::of(a.iter().copied());
    let mb = Moments::of(b.iter().copied());
    z_test_moments(ma, mb, dimension_name, alpha)
}

/// [`z_test`] on precomputed moments.
pub fn z_test_moments(
    a: Moments,
    b: Moments,
    dimension_name: &str,
    alpha: f64,
) -> Result<ZTestResult> {
    if a.n < 2 || b.n < 2 {
        return Err(Error::InvalidArgument(format!(
            "z-test on `{dimension_name}` needs at least 2 values per side, got {} and {}",
            a.n, b.n
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let diff = a.mean - b.mean;
    let se2 = a.variance / a.n as f64 + b.variance / b.n as f64;
    let z_statistic = if se2 > 0.0 {
        diff / se2.sqrt()
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    };
    let p_value = two_tailed_p(z_statistic);
    Ok(ZTestResult {
        dimension_name: dimension_name.to_owned(),
        mean_a: a.mean,
        mean_b: b.mean,
        variance_a: a.variance,
        variance_b: b.variance,
        n_a: a.n,
        n_b: b.n,
        z_statistic,
        p_value,
        similar: p_value >= alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_vectors() {
        let a = [1.0, 2.0, 4.0, 8.0];
        let r = z_test(&a, &a, "x", 0.05).unwrap();
        assert_eq!(r.z_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(r.similar);
    }

    #[test]
    fn constant_vectors_with_different_means() {
        let a = vec![0.0; 100];
        let b = vec![1.0; 100];
        let r = z_test(&a, &b, "x", 0.05).unwrap();
        assert_eq!(r.z_statistic, f64::NEG_INFINITY);
        assert_eq!(r.p_value, 0.0);
        assert!(!r.similar);
        let same = z_test(&a, &a, "x", 0.05).unwrap();
        assert_eq!((same.z_statistic, same.similar), (0.0, true));
    }

    #[test]
    fn one_sided_zero_variance_uses_formula() {
        let a = [2.0, 2.0, 2.0];
        let b = [1.0, 2.0, 3.0];
        let r = z_test(&a, &b, "x", 0.05).unwrap();
        // diff 0, var_b 1
        assert_eq!(r.z_statistic, 0.0);
        let b = [3.0, 4.0, 5.0];
        let r = z_test(&a, &b, "x", 0.05).unwrap();
        assert!((r.z_statistic - (-2.0 / (1.0f64 / 3.0).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn too_short() {
        assert!(z_test(&[1.0], &[1.0, 2.0], "x", 0.05).is_err());
    }

    #[test]
    fn sample_variance_divisor() {
        let m = Moments::of([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.variance - 5.0 / 3.0).abs() < 1e-15);
    }
}
