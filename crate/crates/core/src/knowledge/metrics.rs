/// A named symmetric pair metric `g(a, b) -> distance`.
pub struct PairMetric {
    pub name: &'static str,
    pub eval: fn(&[f64], &[f64]) -> f64,
}

/// The metric features the distance regressor works with. Each metric is
/// symmetric in its arguments and zero on identical inputs.
pub struct PairMetricSet {
    metrics: Vec<PairMetric>,
}

impl PairMetricSet {
    /// Euclidean, Manhattan, and cosine distance.
    pub fn defaults() -> Self {
        PairMetricSet {
            metrics: vec![
                PairMetric {
                    name: "euclidean",
                    eval: euclidean,
                },
                PairMetric {
                    name: "manhattan",
                    eval: manhattan,
                },
                PairMetric {
                    name: "cosine",
                    eval: cosine_distance,
                },
            ],
        }
    }

    pub fn from_metrics(metrics: Vec<PairMetric>) -> Self {
        PairMetricSet { metrics }
    }

    pub fn len(&self) -> usize {
        self.metrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metrics.is_empty()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.metrics.iter().map(|m| m.name).collect()
    }

    /// Feature vector `phi(a, b) = (g_1(a,b), ..., g_M(a,b))`.
    pub fn features(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        self.metrics.iter().map(|m| (m.eval)(a, b)).collect()
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn manhattan(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// `1 - cos(a, b)`; zero vectors compare equal to each other and maximally
/// distant from everything else so the metric stays symmetric and zero on
/// identical inputs.
fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 && nb == 0.0 {
        return 0.0;
    }
    if na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    (1.0 - dot / (na * nb)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngState;

    #[test]
    fn metrics_symmetric_and_zero_on_identical() {
        let set = PairMetricSet::defaults();
        let mut rng = RngState::new(1);
        for _ in 0..20 {
            let a = rng.uniform(-2.0, 2.0, 6).unwrap();
            let b = rng.uniform(-2.0, 2.0, 6).unwrap();
            let ab = set.features(&a, &b);
            let ba = set.features(&b, &a);
            for (x, y) in ab.iter().zip(&ba) {
                assert!((x - y).abs() < 1e-12);
            }
            for v in set.features(&a, &a) {
                assert!(v.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cosine_handles_zero_vectors() {
        let z = vec![0.0; 3];
        let x = vec![1.0, 0.0, 0.0];
        assert_eq!(cosine_distance(&z, &z), 0.0);
        assert_eq!(cosine_distance(&z, &x), 1.0);
        assert_eq!(cosine_distance(&x, &z), 1.0);
    }

    #[test]
    fn hand_checked_values() {
        let a = vec![0.0, 0.0];
        let b = vec![3.0, 4.0];
        assert!((euclidean(&a, &b) - 5.0).abs() < 1e-12);
        assert!((manhattan(&a, &b) - 7.0).abs() < 1e-12);
        let x = vec![1.0, 0.0];
        let y = vec![0.0, 1.0];
        assert!((cosine_distance(&x, &y) - 1.0).abs() < 1e-12);
    }
}
