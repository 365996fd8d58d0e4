use super::EvalError;
use crate::numerics::{sym_eigen, Matrix};

/// Project points onto the top principal components.
///
/// Mean-centers, eigendecomposes the (n-1)-normalized covariance, and
/// projects onto the eigenvectors with the largest absolute eigenvalues.
/// Eigenvector signs follow the first-nonzero-coordinate-positive
/// convention. Degenerate input (all points identical) projects to zeros
/// with zero eigenvalues rather than erroring.
pub fn pca_project(points: &Matrix, components: usize) -> Result<(Matrix, Vec<f64>), EvalError> {
    let n = points.rows();
    let d = points.cols();
    if n < 2 {
        return Err(EvalError::Domain(format!(
            "PCA needs at least 2 points, got {n}"
        )));
    }
    if components == 0 || components > n.min(d) {
        return Err(EvalError::Domain(format!(
            "component count must lie in 1..=min(n, d) = {}, got {components}",
            n.min(d)
        )));
    }

    let mut mean = vec![0.0; d];
    for i in 0..n {
        for (j, v) in points.row(i).iter().enumerate() {
            mean[j] += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }
    let mut centered = Matrix::zeros(n, d);
    for i in 0..n {
        for j in 0..d {
            centered.set(i, j, points.get(i, j) - mean[j]);
        }
    }

    let cov = centered
        .transpose()
        .matmul(&centered)?
        .scale(1.0 / (n as f64 - 1.0));
    let (eigenvalues, mut vectors) = sym_eigen(&cov)?;

    // Fix each eigenvector's sign: first coordinate of visible magnitude
    // must be positive.
    for c in 0..d {
        let lead = (0..d).find(|&r| vectors.get(r, c).abs() > 1e-12);
        if let Some(r) = lead {
            if vectors.get(r, c) < 0.0 {
                for row in 0..d {
                    let v = vectors.get(row, c);
                    vectors.set(row, c, -v);
                }
            }
        }
    }

    let mut basis = Matrix::zeros(d, components);
    for c in 0..components {
        for r in 0..d {
            basis.set(r, c, vectors.get(r, c));
        }
    }
    let projected = centered.matmul(&basis)?;
    Ok((projected, eigenvalues[..components].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{euclidean, RngState};

    fn random_points(rng: &mut RngState, n: usize, d: usize) -> Matrix {
        Matrix::from_vec(n, d, rng.uniform(-2.0, 2.0, n * d).unwrap()).unwrap()
    }

    fn column_variance(m: &Matrix, c: usize) -> f64 {
        let n = m.rows();
        let mean: f64 = (0..n).map(|i| m.get(i, c)).sum::<f64>() / n as f64;
        (0..n)
            .map(|i| (m.get(i, c) - mean) * (m.get(i, c) - mean))
            .sum::<f64>()
            / (n as f64 - 1.0)
    }

    #[test]
    fn rank_one_data_has_one_component() {
        let mut rows = Vec::new();
        for i in 0..6 {
            rows.push(vec![i as f64, 0.0]);
        }
        let pts = Matrix::from_rows(&rows).unwrap();
        let (proj, vals) = pca_project(&pts, 2).unwrap();
        assert!(vals[0] > 1.0);
        assert!(vals[1].abs() < 1e-12);
        // Second component carries no variance.
        assert!(column_variance(&proj, 1) < 1e-12);
    }

    #[test]
    fn projected_variance_equals_eigenvalue() {
        let mut rng = RngState::new(41);
        for _ in 0..10 {
            let pts = random_points(&mut rng, 20, 5);
            let (proj, vals) = pca_project(&pts, 5).unwrap();
            for c in 0..5 {
                let var = column_variance(&proj, c);
                assert!(
                    (var - vals[c]).abs() < 1e-8,
                    "component {c}: variance {var} vs eigenvalue {}",
                    vals[c]
                );
            }
        }
    }

    #[test]
    fn full_rank_projection_preserves_distances() {
        let mut rng = RngState::new(42);
        let pts = random_points(&mut rng, 15, 4);
        let (proj, _) = pca_project(&pts, 4).unwrap();
        for i in 0..15 {
            for j in (i + 1)..15 {
                let a = euclidean(pts.row(i), pts.row(j));
                let b = euclidean(proj.row(i), proj.row(j));
                assert!((a - b).abs() < 1e-8, "pair ({i},{j}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn rotation_preserves_eigenvalues() {
        let mut rng = RngState::new(43);
        let pts = random_points(&mut rng, 30, 2);
        let theta = 0.83f64;
        let (c, s) = (theta.cos(), theta.sin());
        let mut rotated = Matrix::zeros(30, 2);
        for i in 0..30 {
            let (x, y) = (pts.get(i, 0), pts.get(i, 1));
            rotated.set(i, 0, c * x - s * y);
            rotated.set(i, 1, s * x + c * y);
        }
        let (_, v1) = pca_project(&pts, 2).unwrap();
        let (_, v2) = pca_project(&rotated, 2).unwrap();
        for (a, b) in v1.iter().zip(&v2) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn degenerate_points_project_to_zero() {
        let pts = Matrix::from_rows(&[vec![3.0, 1.0], vec![3.0, 1.0], vec![3.0, 1.0]]).unwrap();
        let (proj, vals) = pca_project(&pts, 2).unwrap();
        assert!(proj.as_slice().iter().all(|&v| v.abs() < 1e-12));
        assert!(vals.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn too_many_components_rejected() {
        let pts = Matrix::zeros(3, 2);
        assert!(pca_project(&pts, 3).is_err());
    }
}
