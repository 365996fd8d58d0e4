use super::{KnowledgeError, KnowledgeMatrix, PairMetricSet};
use crate::data::Dataset;

const MIN_KNOWN_PAIRS: usize = 10;

/// Fill every missing entry of a knowledge matrix with a k-nearest-neighbor
/// regression over pair-metric features.
///
/// Each pair `(i,j)` is described by `phi(i,j) = (g_1(m_i,m_j), ...)`; a
/// missing entry is predicted as the mean target of the `k_neighbors` known
/// pairs closest to it in Euclidean `phi` distance. Neighbor-distance ties
/// break toward the lower pair index (row-major over `i < j`). Known entries
/// pass through bit-identical; the output is symmetric and fully known.
pub fn fill_missing_dr(
    mt: &KnowledgeMatrix,
    ds: &Dataset,
    metrics: &PairMetricSet,
    k_neighbors: usize,
) -> Result<KnowledgeMatrix, KnowledgeError> {
    let n = mt.len();
    if ds.len() != n {
        return Err(KnowledgeError::Domain(format!(
            "knowledge matrix is {n}x{n} but the dataset has {} samples",
            ds.len()
        )));
    }
    if k_neighbors == 0 {
        return Err(KnowledgeError::Domain(
            "k_neighbors must be at least 1".into(),
        ));
    }
    if metrics.is_empty() {
        return Err(KnowledgeError::Domain(
            "metric set must not be empty".into(),
        ));
    }
    if mt.fully_known() {
        return Ok(mt.clone());
    }

    // Training set: known off-diagonal unordered pairs in row-major order.
    let mut train_phi: Vec<Vec<f64>> = Vec::new();
    let mut train_target: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if let Some(v) = mt.get(i, j) {
                train_phi.push(metrics.features(ds.sample(i), ds.sample(j)));
                train_target.push(v);
            }
        }
    }
    let minimum = MIN_KNOWN_PAIRS.max(k_neighbors);
    if train_phi.len() < minimum {
        return Err(KnowledgeError::TooFewKnownPairs {
            known: train_phi.len(),
            minimum,
        });
    }

    let mut out = mt.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            if mt.is_known(i, j) {
                continue;
            }
            let phi = metrics.features(ds.sample(i), ds.sample(j));
            let prediction = knn_mean(&train_phi, &train_target, &phi, k_neighbors);
            out.set_pair(i, j, prediction.max(0.0))?;
        }
    }
    debug_assert!(out.fully_known());
    Ok(out)
}

fn knn_mean(train_phi: &[Vec<f64>], train_target: &[f64], query: &[f64], k: usize) -> f64 {
    let mut scored: Vec<(f64, usize)> = train_phi
        .iter()
        .enumerate()
        .map(|(idx, phi)| {
            let d2: f64 = phi.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
            (d2, idx)
        })
        .collect();
    // Ties in distance break toward the lower pair index.
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let k = k.min(scored.len());
    scored[..k]
        .iter()
        .map(|&(_, idx)| train_target[idx])
        .sum::<f64>()
        / k as f64
}
