use super::{ClusterAssignment, EvalError};
use crate::model::LatentEmbedding;
use crate::numerics::{euclidean, Matrix};

/// Per-cluster mean vectors in the latent space and their pairwise
/// Euclidean distance table.
#[derive(Debug, Clone)]
pub struct CentroidReport {
    /// K x r centroid coordinates.
    pub centroids: Matrix,
    /// K x K symmetric distances, zero diagonal.
    pub distances: Matrix,
}

/// Compute latent-space centroids for each cluster of an assignment.
pub fn centroid_report(
    z: &LatentEmbedding,
    assignment: &ClusterAssignment,
) -> Result<CentroidReport, EvalError> {
    if assignment.len() != z.len() {
        return Err(EvalError::Domain(format!(
            "assignment covers {} samples but the embedding has {}",
            assignment.len(),
            z.len()
        )));
    }
    let k = assignment.k();
    let r = z.dim();
    let mut centroids = Matrix::zeros(k, r);
    let mut counts = vec![0usize; k];
    for (i, &c) in assignment.cluster_of().iter().enumerate() {
        counts[c] += 1;
        for (j, v) in z.vector(i).iter().enumerate() {
            centroids.set(c, j, centroids.get(c, j) + v);
        }
    }
    for (c, &count) in counts.iter().enumerate() {
        if count == 0 {
            return Err(EvalError::Domain(format!("cluster {c} is empty")));
        }
        for j in 0..r {
            centroids.set(c, j, centroids.get(c, j) / count as f64);
        }
    }
    let mut distances = Matrix::zeros(k, k);
    for a in 0..k {
        for b in (a + 1)..k {
            let d = euclidean(centroids.row(a), centroids.row(b));
            distances.set(a, b, d);
            distances.set(b, a, d);
        }
    }
    Ok(CentroidReport {
        centroids,
        distances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::ward_cluster;

    fn embedding(rows: &[Vec<f64>]) -> LatentEmbedding {
        let m = Matrix::from_rows(rows).unwrap();
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        LatentEmbedding::new(ids, m).unwrap()
    }

    #[test]
    fn singleton_clusters_have_point_centroids() {
        let z = embedding(&[vec![1.0, 0.0], vec![0.0, 5.0], vec![9.0, 9.0]]);
        let a = ward_cluster(z.vectors(), 3).unwrap();
        let rep = centroid_report(&z, &a).unwrap();
        for i in 0..3 {
            assert_eq!(rep.centroids.row(i), z.vector(i));
        }
    }

    #[test]
    fn unit_distance_table() {
        let z = embedding(&[
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 0.0],
        ]);
        let a = ward_cluster(z.vectors(), 2).unwrap();
        let rep = centroid_report(&z, &a).unwrap();
        assert_eq!(rep.distances.get(0, 0), 0.0);
        assert_eq!(rep.distances.get(1, 1), 0.0);
        assert!((rep.distances.get(0, 1) - 1.0).abs() < 1e-12);
        assert_eq!(rep.distances.get(0, 1), rep.distances.get(1, 0));
    }

    #[test]
    fn centroid_distances_satisfy_triangle_inequality() {
        let mut rng = crate::numerics::RngState::new(71);
        let rows: Vec<Vec<f64>> = (0..15)
            .map(|_| rng.uniform(-3.0, 3.0, 4).unwrap())
            .collect();
        let z = embedding(&rows);
        let a = ward_cluster(z.vectors(), 4).unwrap();
        let rep = centroid_report(&z, &a).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                for w in 0..4 {
                    let lhs = rep.distances.get(x, y);
                    let rhs = rep.distances.get(x, w) + rep.distances.get(w, y);
                    assert!(lhs <= rhs + 1e-9);
                }
            }
        }
    }
}
