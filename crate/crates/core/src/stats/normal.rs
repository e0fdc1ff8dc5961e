use libm::erfc;
use std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF, evaluated through `erfc` so both tails keep
/// relative precision.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Two-tailed p-value `2 * (1 - Φ(|z|))`.
pub fn two_tailed_p(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    erfc(z.abs() * FRAC_1_SQRT_2).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_is_half() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_eq!(two_tailed_p(0.0), 1.0);
    }

    // Reference values from mpmath.ncdf at 50 digits.
    #[test]
    fn matches_high_precision_values() {
        assert!((normal_cdf(1.959963985) - 0.975_000_000_026_881_6).abs() < 1e-12);
        let lower = normal_cdf(-8.0);
        assert!((lower - 6.220_960_574_271_784e-16).abs() < 1e-25, "{lower}");
    }

    #[test]
    fn symmetric_and_monotone() {
        let mut prev = 0.0;
        for i in -400..=400 {
            let x = i as f64 / 40.0;
            let c = normal_cdf(x);
            assert!(c >= prev);
            assert!((c + normal_cdf(-x) - 1.0).abs() < 1e-15);
            prev = c;
        }
        assert_eq!(two_tailed_p(f64::INFINITY), 0.0);
    }
}
