use super::{Matrix, NumericsError};

const SYMMETRY_TOL: f64 = 1e-10;

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted by absolute value (descending) and the matrix
/// whose columns are the matching orthonormal eigenvectors. Input must be
/// square and symmetric within `1e-10`.
pub fn sym_eigen(m: &Matrix) -> Result<(Vec<f64>, Matrix), NumericsError> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(NumericsError::Domain(format!(
            "sym_eigen needs a square matrix, got {rows}x{cols}"
        )));
    }
    let asym = m.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(NumericsError::NotSymmetric {
            max_asymmetry: asym,
        });
    }
    let n = rows;
    let mut a: Vec<f64> = m.as_slice().to_vec();
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
    let mut v: Vec<f64> = Matrix::identity(n).as_slice().to_vec();

    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-14 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (li, lj) = (a[i * n + i].abs(), a[j * n + j].abs());
        lj.partial_cmp(&li).unwrap().then(i.cmp(&j))
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, v[row * n + old_col]);
        }
    }
    Ok((eigenvalues, vectors))
}
