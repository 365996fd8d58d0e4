use super::KnowledgeError;
use crate::data::Dataset;
use crate::numerics::RngState;

/// Symmetric matrix of expert-declared pairwise distances with a known mask.
///
/// Invariants: the diagonal is known and zero; wherever `(i,j)` is known so
/// is `(j,i)` with the same value; known entries are finite and
/// non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeMatrix {
    n: usize,
    entries: Vec<f64>,
    known: Vec<bool>,
}

impl KnowledgeMatrix {
    /// All-unknown matrix (diagonal known and zero).
    pub fn unknown(n: usize) -> Self {
        let mut m = KnowledgeMatrix {
            n,
            entries: vec![0.0; n * n],
            known: vec![false; n * n],
        };
        for i in 0..n {
            m.known[i * n + i] = true;
        }
        m
    }

    /// Fully known all-zero matrix.
    pub fn zeros(n: usize) -> Self {
        KnowledgeMatrix {
            n,
            entries: vec![0.0; n * n],
            known: vec![true; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn is_known(&self, i: usize, j: usize) -> bool {
        self.known[i * self.n + j]
    }

    /// Known entry value; `None` when missing.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        if self.known[i * self.n + j] {
            Some(self.entries[i * self.n + j])
        } else {
            None
        }
    }

    /// Set both `(i,j)` and `(j,i)` and mark them known.
    pub fn set_pair(&mut self, i: usize, j: usize, value: f64) -> Result<(), KnowledgeError> {
        if i >= self.n || j >= self.n {
            return Err(KnowledgeError::Domain(format!(
                "pair ({i},{j}) out of range for n={}",
                self.n
            )));
        }
        if !value.is_finite() || value < 0.0 {
            return Err(KnowledgeError::Domain(format!(
                "distance for pair ({i},{j}) must be finite and non-negative, got {value}"
            )));
        }
        if i == j && value != 0.0 {
            return Err(KnowledgeError::Domain(format!(
                "diagonal entry ({i},{i}) must be zero, got {value}"
            )));
        }
        self.entries[i * self.n + j] = value;
        self.entries[j * self.n + i] = value;
        self.known[i * self.n + j] = true;
        self.known[j * self.n + i] = true;
        Ok(())
    }

    pub fn fully_known(&self) -> bool {
        self.known.iter().all(|&k| k)
    }

    /// Count of known off-diagonal unordered pairs.
    pub fn known_pair_count(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.known[i * self.n + j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Principal submatrix over `indices` (masks carried over).
    pub fn subset(&self, indices: &[usize]) -> Result<KnowledgeMatrix, KnowledgeError> {
        for &i in indices {
            if i >= self.n {
                return Err(KnowledgeError::Domain(format!(
                    "subset index {i} out of range for n={}",
                    self.n
                )));
            }
        }
        {
            let mut seen = indices.to_vec();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != indices.len() {
                return Err(KnowledgeError::Domain(
                    "subset indices contain duplicates".into(),
                ));
            }
        }
        let m = indices.len();
        let mut out = KnowledgeMatrix {
            n: m,
            entries: vec![0.0; m * m],
            known: vec![false; m * m],
        };
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out.entries[a * m + b] = self.entries[i * self.n + j];
                out.known[a * m + b] = self.known[i * self.n + j];
            }
        }
        Ok(out)
    }

    /// Check every invariant: known zero diagonal, symmetric known mask and
    /// values, finite non-negative entries.
    pub fn validate(&self) -> Result<(), KnowledgeError> {
        for i in 0..self.n {
            if !self.known[i * self.n + i] || self.entries[i * self.n + i] != 0.0 {
                return Err(KnowledgeError::Domain(format!(
                    "diagonal entry ({i},{i}) must be known and zero"
                )));
            }
            for j in (i + 1)..self.n {
                let kij = self.known[i * self.n + j];
                let kji = self.known[j * self.n + i];
                if kij != kji {
                    return Err(KnowledgeError::Domain(format!(
                        "known mask is asymmetric at ({i},{j})"
                    )));
                }
                if kij {
                    let vij = self.entries[i * self.n + j];
                    let vji = self.entries[j * self.n + i];
                    if vij != vji {
                        return Err(KnowledgeError::Domain(format!(
                            "entries asymmetric at ({i},{j}): {vij} vs {vji}"
                        )));
                    }
                    if !vij.is_finite() || vij < 0.0 {
                        return Err(KnowledgeError::Domain(format!(
                            "entry ({i},{j}) must be finite and non-negative, got {vij}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Same-category bounds and cross-category base offsets for building a
/// knowledge matrix from labels.
///
/// Same-category pair distances are drawn from `[alpha1, alpha2)`; a pair
/// from categories `x != y` is drawn from `[gamma(x,y), gamma(x,y)+1)`.
#[derive(Debug, Clone)]
pub struct GammaTable {
    alpha1: f64,
    alpha2: f64,
    k: usize,
    gamma: Vec<f64>,
}

impl GammaTable {
    /// Uniform table: every cross-category offset is `gamma`.
    pub fn uniform(k: usize, alpha1: f64, alpha2: f64, gamma: f64) -> Result<Self, KnowledgeError> {
        let mut t = GammaTable {
            alpha1,
            alpha2,
            k,
            gamma: vec![gamma; k * k],
        };
        for i in 0..k {
            t.gamma[i * k + i] = 0.0;
        }
        t.validate()?;
        Ok(t)
    }

    /// Table with per-pair offsets; `pairs` lists `(x, y, gamma_xy)` with
    /// 0-based category indices. Unlisted pairs use `default_gamma`.
    pub fn with_pairs(
        k: usize,
        alpha1: f64,
        alpha2: f64,
        default_gamma: f64,
        pairs: &[(usize, usize, f64)],
    ) -> Result<Self, KnowledgeError> {
        let mut t = GammaTable::uniform(k, alpha1, alpha2, default_gamma)?;
        for &(x, y, g) in pairs {
            if x >= k || y >= k || x == y {
                return Err(KnowledgeError::Domain(format!(
                    "gamma pair ({x},{y}) invalid for K={k}"
                )));
            }
            t.gamma[x * k + y] = g;
            t.gamma[y * k + x] = g;
        }
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), KnowledgeError> {
        if self.alpha1 >= self.alpha2 || self.alpha1.is_nan() || self.alpha2.is_nan() {
            return Err(KnowledgeError::Domain(format!(
                "alpha1 must be below alpha2, got {} and {}",
                self.alpha1, self.alpha2
            )));
        }
        for x in 0..self.k {
            for y in (x + 1)..self.k {
                let g = self.gamma[x * self.k + y];
                // gamma == alpha2 is allowed: the same-category interval is
                // half-open, so same-category draws still fall strictly
                // below every cross-category draw.
                if g < self.alpha2 || g.is_nan() {
                    return Err(KnowledgeError::Domain(format!(
                        "gamma({x},{y}) = {g} must be at least alpha2 = {}",
                        self.alpha2
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> (f64, f64) {
        (self.alpha1, self.alpha2)
    }

    pub fn gamma(&self, x: usize, y: usize) -> f64 {
        self.gamma[x * self.k + y]
    }
}

/// Build a fully known knowledge matrix from dataset labels.
///
/// Each unordered pair is drawn once (row-major order over `i < j`), so the
/// result is symmetric by construction; the diagonal is zero.
pub fn build_from_labels(
    ds: &Dataset,
    table: &GammaTable,
    rng: &mut RngState,
) -> Result<KnowledgeMatrix, KnowledgeError> {
    let labels = ds.labels().ok_or(KnowledgeError::Unlabeled)?;
    if ds.class_count() != table.class_count() {
        return Err(KnowledgeError::Domain(format!(
            "gamma table covers {} categories but the dataset has {}",
            table.class_count(),
            ds.class_count()
        )));
    }
    let n = ds.len();
    let (alpha1, alpha2) = table.alpha();
    let mut mt = KnowledgeMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let value = if labels[i] == labels[j] {
                rng.uniform_one(alpha1, alpha2)
            } else {
                let g = table.gamma(labels[i], labels[j]);
                rng.uniform_one(g, g + 1.0)
            }
            .map_err(|e| KnowledgeError::Domain(e.to_string()))?;
            mt.set_pair(i, j, value)?;
        }
    }
    Ok(mt)
}

/// Fully known matrix of uniform noise in `[0,1)`: the faulty-knowledge
/// ablation. Symmetric, zero diagonal.
pub fn corrupt_noisy(n: usize, rng: &mut RngState) -> Result<KnowledgeMatrix, KnowledgeError> {
    if n < 2 {
        return Err(KnowledgeError::Domain(format!(
            "noisy knowledge matrix needs n >= 2, got {n}"
        )));
    }
    let mut mt = KnowledgeMatrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let value = rng
                .uniform_one(0.0, 1.0)
                .map_err(|e| KnowledgeError::Domain(e.to_string()))?;
            mt.set_pair(i, j, value)?;
        }
    }
    Ok(mt)
}
