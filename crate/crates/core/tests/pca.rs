mod common;

use common::charpoly::{char_poly, real_roots};
use idsample_core::pca::{fit_matrix, symmetric_eigen, variance_summary, PcaOptions};
use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symmetric(d: usize, rng: &mut impl Rng) -> Array2<f64> {
    let mut m = Array2::zeros((d, d));
    for i in 0..d {
        for j in i..d {
            let v = rng.random_range(-10.0..10.0);
            m[[i, j]] = v;
            m[[j, i]] = v;
        }
    }
    m
}

fn frobenius(m: &Array2<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn eigenvectors_are_orthonormal_and_satisfy_the_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for d in 1..=10 {
        for _ in 0..20 {
            let c = random_symmetric(d, &mut rng);
            let e = symmetric_eigen(&c).unwrap();
            let v = &e.vectors;
            let gram = v.t().dot(v);
            for i in 0..d {
                for j in 0..d {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((gram[[i, j]] - want).abs() < 1e-9);
                }
            }
            let lambda = Array2::from_diag(&Array1::from(e.values.clone()));
            let residual = c.dot(v) - v.dot(&lambda);
            assert!(frobenius(&residual) <= 1e-8 * frobenius(&c).max(1.0));
        }
    }
}

#[test]
fn eigenvalues_match_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 1..=4 {
        for _ in 0..25 {
            let c = random_symmetric(d, &mut rng);
            let mut got = symmetric_eigen(&c).unwrap().values;
            got.sort_by(f64::total_cmp);
            let want = real_roots(&char_poly(&c));
            for (g, w) in got.iter().zip(&want) {
                assert!(
                    (g - w).abs() <= 1e-7 * frobenius(&c).max(1.0),
                    "{got:?} vs {want:?}"
                );
            }
        }
    }
}

#[test]
fn known_spectrum_ratios() {
    // Axis-aligned point pairs give a covariance proportional to
    // diag(4, 1, 0.01).
    let s = [4.0f64, 1.0, 0.01];
    let mut rows = Vec::new();
    for (axis, &v) in s.iter().enumerate() {
        for sign in [-1.0, 1.0] {
            let mut r = [0.0; 3];
            r[axis] = sign * v.sqrt();
            rows.extend(r);
        }
    }
    let data = Array2::from_shape_vec((6, 3), rows).unwrap();
    let names: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let model = fit_matrix(
        data.view(),
        &names,
        PcaOptions {
            k: 3,
            standardize: false,
        },
    )
    .unwrap();
    let v = variance_summary(&model);
    let total = 5.01;
    assert!((v.per_dim_ratio[0] - 4.0 / total).abs() < 1e-12);
    assert!((v.cumulative[0] - 0.7984031936).abs() < 1e-9);
    assert!((v.cumulative[1] - 0.9980039920).abs() < 1e-9);
    assert!((v.cumulative[2] - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cumulative_ratios_are_monotone(
        seed in any::<u64>(),
        n in 3usize..40,
        d in 1usize..8,
        k in 1usize..8,
    ) {
        let k = k.min(d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = Array2::from_shape_fn((n, d), |_| rng.random_range(-5.0..5.0));
        let names: Vec<String> = (0..d).map(|i| format!("f{i}")).collect();
        let model = fit_matrix(data.view(), &names, PcaOptions { k, standardize: false }).unwrap();
        let v = variance_summary(&model);
        prop_assert_eq!(v.cumulative.len(), k);
        for w in v.cumulative.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        prop_assert!(v.per_dim_ratio.iter().all(|&r| r >= 0.0));
        prop_assert!(v.accumulative_variance <= 1.0 + 1e-9);
        // near-equal eigenvalues are ordered by dominant index instead
        let tie = 1e-12 * model.total_variance;
        for w in model.eigenvalues.windows(2) {
            prop_assert!(w[0] >= w[1] - tie);
        }
    }
}
