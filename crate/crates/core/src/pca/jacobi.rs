//! Cyclic Jacobi eigendecomposition of real symmetric matrices.

use ndarray::Array2;

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to the
/// full Frobenius norm of the input.
pub const RELATIVE_TOLERANCE: f64 = 1e-12;

/// Unordered eigenpairs; column `i` of `vectors` pairs with `values[i]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            sum += a[[p, q]] * a[[p, q]];
        }
    }
    (2.0 * sum).sqrt()
}

/// Eigendecomposition by cyclic row-order Jacobi sweeps. Only the upper
/// triangle of `matrix` is read.
pub fn symmetric_eigen(matrix: &Array2<f64>) -> Result<SymmetricEigen> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, not square",
            n,
            matrix.ncols()
        )));
    }
    let mut a = Array2::<f64>::zeros((n, n));
    for p in 0..n {
        for q in p..n {
            let v = matrix[[p, q]];
            if !v.is_finite() {
                return Err(Error::Numerical("non-finite matrix entry".into()));
            }
            a[[p, q]] = v;
            a[[q, p]] = v;
        }
    }
    let mut v = Array2::<f64>::eye(n);
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tolerance = RELATIVE_TOLERANCE * norm;

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > tolerance {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                // Angle that zeroes a[p][q]: cot(2φ) = theta, t = tan(φ).
                let theta = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                a[[p, q]] = 0.0;
                a[[q, p]] = 0.0;
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    Ok(SymmetricEigen {
        values: (0..n).map(|i| a[[i, i]]).collect(),
        vectors: v,
        sweeps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn diagonal_input_needs_no_sweeps() {
        let e = symmetric_eigen(&array![[3.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(e.sweeps, 0);
        assert_eq!(e.values, vec![3.0, 1.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // eigenvalues of [[2,1],[1,2]] are 3 and 1
        let e = symmetric_eigen(&array![[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let mut vals = e.values.clone();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let e = symmetric_eigen(&Array2::zeros((3, 3))).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_square() {
        assert!(symmetric_eigen(&Array2::zeros((2, 3))).is_err());
    }
}
