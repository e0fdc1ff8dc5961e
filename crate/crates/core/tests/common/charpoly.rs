//! Eigenvalue oracle independent of any iterative eigen-solver: roots of
//! the characteristic polynomial.

use ndarray::Array2;

/// Characteristic polynomial coefficients by Faddeev-LeVerrier:
/// p(x) = x^d + c[1] x^(d-1) + ... + c[d].
pub fn char_poly(a: &Array2<f64>) -> Vec<f64> {
    let d = a.nrows();
    let mut c = vec![1.0];
    let mut m = Array2::<f64>::zeros((d, d));
    for k in 1..=d {
        m = a.dot(&m) + Array2::<f64>::eye(d) * c[k - 1];
        let am = a.dot(&m);
        c.push(-am.diag().sum() / k as f64);
    }
    c
}

/// All roots of a monic polynomial by Durand-Kerner, polished with Newton.
pub fn real_roots(c: &[f64]) -> Vec<f64> {
    let d = c.len() - 1;
    let eval = |x: (f64, f64)| {
        c.iter().fold((0.0, 0.0), |(re, im), &k| {
            (re * x.0 - im * x.1 + k, re * x.1 + im * x.0)
        })
    };
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|i| {
            let t = 0.4f64 + 0.9 * i as f64;
            let r = 1.0 + c.iter().map(|v| v.abs()).fold(0.0, f64::max);
            (r * t.cos(), r * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        for i in 0..d {
            let num = eval(z[i]);
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if i != j {
                    let diff = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    den = (
                        den.0 * diff.0 - den.1 * diff.1,
                        den.0 * diff.1 + den.1 * diff.0,
                    );
                }
            }
            let n2 = den.0 * den.0 + den.1 * den.1;
            if n2 == 0.0 {
                continue;
            }
            let q = (
                (num.0 * den.0 + num.1 * den.1) / n2,
                (num.1 * den.0 - num.0 * den.1) / n2,
            );
            z[i] = (z[i].0 - q.0, z[i].1 - q.1);
        }
    }
    let mut roots: Vec<f64> = z
        .iter()
        .map(|&(re, _)| {
            let mut x = re;
            for _ in 0..50 {
                let p = c.iter().fold(0.0, |acc, &k| acc * x + k);
                let dp = c[..d]
                    .iter()
                    .enumerate()
                    .fold(0.0, |acc, (i, &k)| acc * x + k * (d - i) as f64);
                if dp == 0.0 {
                    break;
                }
                x -= p / dp;
            }
            x
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}
