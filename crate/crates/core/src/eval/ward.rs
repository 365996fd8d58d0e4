use super::EvalError;
use crate::numerics::Matrix;

/// One agglomeration step: the two merged cluster ids and the Ward cost.
///
/// Ids follow the usual convention: singletons are `0..n-1` and the cluster
/// created by step `t` gets id `n + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeStep {
    pub left: usize,
    pub right: usize,
    pub cost: f64,
}

/// Result of agglomerative clustering down to `k` clusters.
#[derive(Debug, Clone)]
pub struct ClusterAssignment {
    sample_ids: Vec<String>,
    cluster_of: Vec<usize>,
    k: usize,
    merge_history: Vec<MergeStep>,
}

impl ClusterAssignment {
    pub fn len(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster_of.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn merge_history(&self) -> &[MergeStep] {
        &self.merge_history
    }

    /// Replace the default row-index ids with the caller's sample ids.
    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self, EvalError> {
        if ids.len() != self.cluster_of.len() {
            return Err(EvalError::Domain(format!(
                "{} ids for {} clustered samples",
                ids.len(),
                self.cluster_of.len()
            )));
        }
        self.sample_ids = ids;
        Ok(self)
    }

    /// Members of each cluster, by cluster index.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

/// Ward merge cost between two clusters: the increase in total
/// within-cluster sum of squares, `|A||B|/(|A|+|B|) * ||mean_A - mean_B||^2`.
/// For singletons this is half the squared Euclidean distance.
fn singleton_cost(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    0.5 * acc
}

/// Agglomerative clustering with Ward linkage via Lance-Williams updates.
///
/// Starts from singletons and merges the minimum-cost pair until `k`
/// clusters remain. Cost ties break toward the smallest `(left, right)`
/// cluster-id pair. Cluster indices in the result are ordered by each
/// cluster's smallest member position.
pub fn ward_cluster(points: &Matrix, k: usize) -> Result<ClusterAssignment, EvalError> {
    let n = points.rows();
    if k == 0 {
        return Err(EvalError::Domain("cluster count must be at least 1".into()));
    }
    if k > n {
        return Err(EvalError::Domain(format!(
            "cannot form {k} clusters from {n} points"
        )));
    }

    // Slot state: merged clusters reuse the left slot.
    let mut alive = vec![true; n];
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut cost = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = singleton_cost(points.row(i), points.row(j));
            cost[i * n + j] = c;
            cost[j * n + i] = c;
        }
    }

    let mut history = Vec::with_capacity(n - k);
    for t in 0..(n - k) {
        // Global minimum over alive pairs; ties by (min id, max id).
        let mut best: Option<(f64, usize, usize, usize, usize)> = None;
        for si in 0..n {
            if !alive[si] {
                continue;
            }
            for sj in (si + 1)..n {
                if !alive[sj] {
                    continue;
                }
                let c = cost[si * n + sj];
                let (lo, hi) = if id[si] < id[sj] {
                    (id[si], id[sj])
                } else {
                    (id[sj], id[si])
                };
                let better = match best {
                    None => true,
                    Some((bc, blo, bhi, _, _)) => c < bc || (c == bc && (lo, hi) < (blo, bhi)),
                };
                if better {
                    best = Some((c, lo, hi, si, sj));
                }
            }
        }
        let (merge_cost, lo, hi, p, q) =
            best.ok_or_else(|| EvalError::Domain("no pair to merge".into()))?;
        history.push(MergeStep {
            left: lo,
            right: hi,
            cost: merge_cost,
        });

        // Lance-Williams update of every surviving cost against the merge.
        let (sp, sq) = (size[p] as f64, size[q] as f64);
        for x in 0..n {
            if !alive[x] || x == p || x == q {
                continue;
            }
            let sx = size[x] as f64;
            let updated = ((sp + sx) * cost[p * n + x] + (sq + sx) * cost[q * n + x]
                - sx * merge_cost)
                / (sp + sq + sx);
            cost[p * n + x] = updated;
            cost[x * n + p] = updated;
        }
        alive[q] = false;
        size[p] += size[q];
        let moved = std::mem::take(&mut members[q]);
        members[p].extend(moved);
        id[p] = n + t;
    }

    // Canonical cluster order: by smallest member position.
    let mut final_slots: Vec<usize> = (0..n).filter(|&s| alive[s]).collect();
    for &slot in &final_slots {
        members[slot].sort_unstable();
    }
    final_slots.sort_by_key(|&s| members[s][0]);
    let mut cluster_of = vec![0usize; n];
    for (c, &slot) in final_slots.iter().enumerate() {
        for &m in &members[slot] {
            cluster_of[m] = c;
        }
    }

    Ok(ClusterAssignment {
        sample_ids: (0..n).map(|i| i.to_string()).collect(),
        cluster_of,
        k,
        merge_history: history,
    })
}
