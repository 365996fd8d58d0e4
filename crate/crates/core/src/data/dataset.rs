use super::DataError;
use crate::numerics::Matrix;

/// Per-feature interpretation used when recombining windowed reconstructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Continuous,
    /// Integer-coded category; reconstruction aggregation uses majority vote.
    CategoricalCoded,
}

/// Indexed tabular samples with optional category labels.
///
/// All samples share the feature dimension `d`; labels, when present, are
/// dense indices `0..K-1` with `K >= 2`; sample ids are unique.
#[derive(Debug, Clone)]
pub struct Dataset {
    sample_ids: Vec<String>,
    features: Matrix,
    labels: Option<Vec<usize>>,
    label_names: Vec<String>,
    feature_names: Vec<String>,
    feature_kind: Vec<FeatureKind>,
}

impl Dataset {
    pub fn new(
        sample_ids: Vec<String>,
        features: Matrix,
        labels: Option<Vec<usize>>,
        label_names: Vec<String>,
        feature_names: Vec<String>,
        feature_kind: Vec<FeatureKind>,
    ) -> Result<Self, DataError> {
        let n = features.rows();
        let d = features.cols();
        if sample_ids.len() != n {
            return Err(DataError::Domain(format!(
                "{} sample ids for {n} samples",
                sample_ids.len()
            )));
        }
        {
            let mut seen = sample_ids.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != n {
                return Err(DataError::Domain("sample ids are not unique".into()));
            }
        }
        if feature_names.len() != d || feature_kind.len() != d {
            return Err(DataError::Domain(format!(
                "feature metadata length mismatch: {} names, {} kinds, d={d}",
                feature_names.len(),
                feature_kind.len()
            )));
        }
        if let Some(ls) = &labels {
            if ls.len() != n {
                return Err(DataError::Domain(format!(
                    "{} labels for {n} samples",
                    ls.len()
                )));
            }
            let k = label_names.len();
            if k < 2 {
                return Err(DataError::Domain(format!(
                    "labels must cover at least 2 classes, got {k}"
                )));
            }
            let mut present = vec![false; k];
            for &l in ls {
                if l >= k {
                    return Err(DataError::Domain(format!(
                        "label index {l} out of range for {k} classes"
                    )));
                }
                present[l] = true;
            }
            if present.iter().any(|p| !p) {
                return Err(DataError::Domain(
                    "every label class must appear at least once".into(),
                ));
            }
        }
        Ok(Dataset {
            sample_ids,
            features,
            labels,
            label_names,
            feature_names,
            feature_kind,
        })
    }

    /// Unlabeled dataset with default metadata (continuous features `f0..`).
    pub fn from_features(features: Matrix) -> Result<Self, DataError> {
        let n = features.rows();
        let d = features.cols();
        Dataset::new(
            (0..n).map(|i| i.to_string()).collect(),
            features,
            None,
            Vec::new(),
            (0..d).map(|j| format!("f{j}")).collect(),
            vec![FeatureKind::Continuous; d],
        )
    }

    pub fn len(&self) -> usize {
        self.features.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Feature dimension `d`.
    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    /// Number of label classes; zero when unlabeled.
    pub fn class_count(&self) -> usize {
        if self.labels.is_some() {
            self.label_names.len()
        } else {
            0
        }
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn feature_kind(&self) -> &[FeatureKind] {
        &self.feature_kind
    }

    /// New dataset holding the rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset, DataError> {
        let d = self.dim();
        let mut values = Vec::with_capacity(indices.len() * d);
        let mut ids = Vec::with_capacity(indices.len());
        let mut labels = self
            .labels
            .as_ref()
            .map(|_| Vec::with_capacity(indices.len()));
        for &i in indices {
            if i >= self.len() {
                return Err(DataError::Domain(format!(
                    "subset index {i} out of range for {} samples",
                    self.len()
                )));
            }
            values.extend_from_slice(self.features.row(i));
            ids.push(self.sample_ids[i].clone());
            if let (Some(out), Some(src)) = (&mut labels, &self.labels) {
                out.push(src[i]);
            }
        }
        let features = Matrix::from_vec(indices.len(), d, values)
            .map_err(|e| DataError::Domain(e.to_string()))?;
        Ok(Dataset {
            sample_ids: ids,
            features,
            labels,
            label_names: self.label_names.clone(),
            feature_names: self.feature_names.clone(),
            feature_kind: self.feature_kind.clone(),
        })
    }
}
