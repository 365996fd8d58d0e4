use super::{DataError, Dataset, FeatureKind};
use crate::numerics::{Matrix, RngState};

/// Shape presets mimicking the three dataset regimes the experiments target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticProfile {
    /// Few features, many samples, several categories.
    EconomicsLike,
    /// Tens of features, thousands of samples, two categories.
    PhysicsLike,
    /// Very wide features, few samples, three categories.
    BiologyLike,
}

impl SyntheticProfile {
    /// Default `(n, d, K)` for the profile.
    pub fn default_shape(self) -> (usize, usize, usize) {
        match self {
            SyntheticProfile::EconomicsLike => (2000, 9, 4),
            SyntheticProfile::PhysicsLike => (2500, 33, 2),
            SyntheticProfile::BiologyLike => (90, 512, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SyntheticProfile::EconomicsLike => "economics_like",
            SyntheticProfile::PhysicsLike => "physics_like",
            SyntheticProfile::BiologyLike => "biology_like",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "economics_like" => Some(SyntheticProfile::EconomicsLike),
            "physics_like" => Some(SyntheticProfile::PhysicsLike),
            "biology_like" => Some(SyntheticProfile::BiologyLike),
            _ => None,
        }
    }
}

/// Share of per-feature variance carried by shared noise factors.
const FACTOR_SHARE: f64 = 0.75;

/// Generate `K` Gaussian clusters with unit-variance features and labels.
///
/// Cluster means sit on the normalized all-ones direction at
/// `0, separation, 2*separation, ...`, so adjacent cluster means are
/// `separation` apart. The noise around each mean is correlated: a few
/// shared factor directions, orthogonal to the class axis, carry most of
/// the variance, with independent per-feature noise making each feature's
/// marginal variance one. Class structure is therefore not the dominant
/// variance direction, matching the regimes the profiles imitate.
/// Class sizes differ by at most one; samples are laid out class-by-class
/// in index order.
pub fn generate_synthetic(
    profile: SyntheticProfile,
    n: usize,
    d: usize,
    k: usize,
    separation: f64,
    rng: &mut RngState,
) -> Result<Dataset, DataError> {
    if k < 2 {
        return Err(DataError::Domain(format!(
            "need at least 2 clusters, got {k}"
        )));
    }
    if n < k {
        return Err(DataError::Domain(format!(
            "need at least as many samples as clusters, got n={n}, K={k}"
        )));
    }
    if d == 0 {
        return Err(DataError::Domain(
            "feature dimension must be positive".into(),
        ));
    }
    if separation < 0.0 || separation.is_nan() {
        return Err(DataError::Domain(format!(
            "separation must be non-negative, got {separation}"
        )));
    }

    let unit = 1.0 / (d as f64).sqrt();
    // Shared factor directions, orthogonal to the class axis and each other.
    let class_axis = vec![unit; d];
    let factor_count = (d / 8).clamp(3, 7).min(d.saturating_sub(1));
    let factors = orthonormal_factors(&class_axis, factor_count, d, rng);
    // Each factor carries an equal slice of the shared variance; scaled so
    // that factor plus residual noise gives unit marginal feature variance.
    let factor_scale = if factors.is_empty() {
        0.0
    } else {
        (FACTOR_SHARE * d as f64 / factors.len() as f64).sqrt()
    };
    let residual_scale = if factors.is_empty() {
        1.0
    } else {
        (1.0 - FACTOR_SHARE).sqrt()
    };

    let mut values = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    // Class c gets n/k samples plus one of the remainder.
    let base = n / k;
    let extra = n % k;
    for c in 0..k {
        let count = base + usize::from(c < extra);
        let mean = c as f64 * separation * unit;
        for _ in 0..count {
            let weights: Vec<f64> = (0..factors.len())
                .map(|_| factor_scale * rng.normal())
                .collect();
            for i in 0..d {
                let shared: f64 = factors.iter().zip(&weights).map(|(f, w)| w * f[i]).sum();
                values.push(mean + shared + residual_scale * rng.normal());
            }
            labels.push(c);
        }
    }

    let features = Matrix::from_vec(n, d, values).map_err(|e| DataError::Domain(e.to_string()))?;
    Dataset::new(
        (0..n)
            .map(|i| format!("{}{i}", profile_prefix(profile)))
            .collect(),
        features,
        Some(labels),
        (0..k).map(|c| c.to_string()).collect(),
        (0..d).map(|j| format!("f{j}")).collect(),
        vec![FeatureKind::Continuous; d],
    )
}

fn profile_prefix(p: SyntheticProfile) -> &'static str {
    match p {
        SyntheticProfile::EconomicsLike => "e",
        SyntheticProfile::PhysicsLike => "p",
        SyntheticProfile::BiologyLike => "b",
    }
}

/// Random orthonormal directions orthogonal to `axis` (Gram-Schmidt over
/// seeded Gaussian draws).
fn orthonormal_factors(axis: &[f64], count: usize, d: usize, rng: &mut RngState) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = vec![axis.to_vec()];
    let mut factors = Vec::with_capacity(count);
    while factors.len() < count {
        let mut v: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot * y;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // degenerate draw, resample
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        basis.push(v.clone());
        factors.push(v);
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::euclidean;

    #[test]
    fn well_separated_clusters_are_nearest_centroid_pure() {
        let mut rng = RngState::new(3);
        let ds =
            generate_synthetic(SyntheticProfile::PhysicsLike, 200, 8, 2, 10.0, &mut rng).unwrap();
        let labels = ds.labels().unwrap();
        let d = ds.dim();
        let k = 2;
        let mut centroids = vec![vec![0.0; d]; k];
        let mut counts = vec![0usize; k];
        for i in 0..ds.len() {
            counts[labels[i]] += 1;
            for (j, v) in ds.sample(i).iter().enumerate() {
                centroids[labels[i]][j] += v;
            }
        }
        for (c, count) in centroids.iter_mut().zip(&counts) {
            for v in c.iter_mut() {
                *v /= *count as f64;
            }
        }
        let mut errors = 0;
        for i in 0..ds.len() {
            let best = (0..k)
                .min_by(|&a, &b| {
                    euclidean(ds.sample(i), &centroids[a])
                        .partial_cmp(&euclidean(ds.sample(i), &centroids[b]))
                        .unwrap()
                })
                .unwrap();
            if best != labels[i] {
                errors += 1;
            }
        }
        assert_eq!(errors, 0);
    }

    #[test]
    fn physics_profile_defaults_match_expected_shape() {
        let (n, d, k) = SyntheticProfile::PhysicsLike.default_shape();
        assert_eq!((n, d, k), (2500, 33, 2));
        let mut rng = RngState::new(1);
        let ds = generate_synthetic(SyntheticProfile::PhysicsLike, n, d, k, 4.0, &mut rng).unwrap();
        assert_eq!(ds.len(), 2500);
        assert_eq!(ds.dim(), 33);
        assert_eq!(ds.class_count(), 2);
    }

    #[test]
    fn zero_separation_clusters_coincide() {
        let mut rng = RngState::new(5);
        let ds =
            generate_synthetic(SyntheticProfile::BiologyLike, 300, 4, 3, 0.0, &mut rng).unwrap();
        // With coincident clusters the class-conditional means agree; a
        // nearest-centroid rule is near chance, i.e. error around (K-1)/K.
        let labels = ds.labels().unwrap();
        let d = ds.dim();
        let mut centroids = vec![vec![0.0; d]; 3];
        let mut counts = vec![0usize; 3];
        for i in 0..ds.len() {
            counts[labels[i]] += 1;
            for (j, v) in ds.sample(i).iter().enumerate() {
                centroids[labels[i]][j] += v;
            }
        }
        for (c, count) in centroids.iter_mut().zip(&counts) {
            for v in c.iter_mut() {
                *v /= *count as f64;
            }
        }
        let mut errors = 0;
        for i in 0..ds.len() {
            let best = (0..3)
                .min_by(|&a, &b| {
                    euclidean(ds.sample(i), &centroids[a])
                        .partial_cmp(&euclidean(ds.sample(i), &centroids[b]))
                        .unwrap()
                })
                .unwrap();
            if best != labels[i] {
                errors += 1;
            }
        }
        let rate = errors as f64 / ds.len() as f64;
        let chance = 2.0 / 3.0;
        assert!(
            (rate - chance).abs() < 0.15,
            "rate {rate} not near chance {chance}"
        );
    }

    #[test]
    fn class_counts_differ_by_at_most_one() {
        let mut rng = RngState::new(8);
        let ds =
            generate_synthetic(SyntheticProfile::EconomicsLike, 103, 3, 4, 1.0, &mut rng).unwrap();
        let mut counts = vec![0usize; 4];
        for &l in ds.labels().unwrap() {
            counts[l] += 1;
        }
        let max = counts.iter().max().unwrap();
        let min = counts.iter().min().unwrap();
        assert!(max - min <= 1, "counts {counts:?}");
    }

    #[test]
    fn rejects_fewer_samples_than_clusters() {
        let mut rng = RngState::new(9);
        assert!(
            generate_synthetic(SyntheticProfile::EconomicsLike, 2, 3, 4, 1.0, &mut rng).is_err()
        );
    }
}
