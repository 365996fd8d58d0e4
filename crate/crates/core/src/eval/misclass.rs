use super::{ClusterAssignment, EvalError};

/// Minimum error rate over all bijections from cluster index to label.
///
/// For `K <= 8` every one of the `K!` mappings is tried; beyond that the
/// optimum comes from an optimal-assignment solve on the confusion matrix,
/// which provably matches the enumeration. Returns the rate and the best
/// cluster-to-label map.
pub fn misclassification(
    pred: &ClusterAssignment,
    sample_ids: &[String],
    labels: &[usize],
) -> Result<(f64, Vec<usize>), EvalError> {
    if pred.sample_ids() != sample_ids {
        return Err(EvalError::Domain(
            "prediction and label sample ids do not match".into(),
        ));
    }
    if labels.len() != pred.len() {
        return Err(EvalError::Domain(format!(
            "{} labels for {} predictions",
            labels.len(),
            pred.len()
        )));
    }
    let k = pred.k();
    let distinct = {
        let mut seen = labels.to_vec();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    if distinct != k {
        return Err(EvalError::Domain(format!(
            "{distinct} distinct labels for {k} clusters"
        )));
    }
    if labels.iter().any(|&l| l >= k) {
        return Err(EvalError::Domain(format!(
            "label index out of range for K={k}"
        )));
    }

    let mut confusion = vec![vec![0usize; k]; k];
    for (&c, &l) in pred.cluster_of().iter().zip(labels) {
        confusion[c][l] += 1;
    }
    let (matches, map) = if k <= 8 {
        best_label_matching_enumeration(&confusion)
    } else {
        best_label_matching_assignment(&confusion)
    };
    let total = labels.len();
    Ok((1.0 - matches as f64 / total as f64, map))
}

/// Exhaustive search over all `K!` cluster-to-label bijections; returns the
/// matched count and the best map.
pub fn best_label_matching_enumeration(confusion: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let k = confusion.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = usize::MIN;
    let mut best_map = perm.clone();
    // Heap's algorithm, iterative form.
    let score =
        |p: &[usize]| -> usize { p.iter().enumerate().map(|(c, &l)| confusion[c][l]).sum() };
    let s = score(&perm);
    if s > best {
        best = s;
        best_map = perm.clone();
    }
    let mut counters = vec![0usize; k];
    let mut i = 1;
    while i < k {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            let s = score(&perm);
            if s > best {
                best = s;
                best_map = perm.clone();
            }
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    (best, best_map)
}

/// Optimal assignment (Hungarian algorithm with potentials) maximizing the
/// matched count on the confusion matrix.
pub fn best_label_matching_assignment(confusion: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let max_entry = confusion
        .iter()
        .flat_map(|row| row.iter())
        .copied()
        .max()
        .unwrap_or(0) as i64;
    // Minimize (max - count) == maximize count.
    let cost: Vec<Vec<i64>> = confusion
        .iter()
        .map(|row| row.iter().map(|&c| max_entry - c as i64).collect())
        .collect();
    let assign = hungarian_min(&cost);
    let matches = assign
        .iter()
        .enumerate()
        .map(|(c, &l)| confusion[c][l])
        .sum();
    (matches, assign)
}

/// Square min-cost assignment; returns `assign[row] = col`.
fn hungarian_min(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = i64::MAX / 2;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut matched_row = vec![0usize; n + 1]; // column -> row (1-based)
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if matched_row[j] > 0 {
            assign[matched_row[j] - 1] = j - 1;
        }
    }
    assign
}
