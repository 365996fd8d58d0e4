//! Everything downstream of the latent space: Ward clustering,
//! permutation-optimal misclassification, PCA projection, farthest-first
//! subsampling, and centroid-distance reporting.

mod centroids;
mod misclass;
mod pca;
mod subsample;
mod ward;

pub use centroids::{centroid_report, CentroidReport};
pub use misclass::{
    best_label_matching_assignment, best_label_matching_enumeration, misclassification,
};
pub use pca::pca_project;
pub use subsample::setcover_subsample;
pub use ward::{ward_cluster, ClusterAssignment, MergeStep};

use crate::model::LatentEmbedding;
use crate::numerics::{Matrix, NumericsError};
use std::fmt;

#[derive(Debug)]
pub enum EvalError {
    Domain(String),
    Numerics(NumericsError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Domain(msg) => write!(f, "{msg}"),
            EvalError::Numerics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<NumericsError> for EvalError {
    fn from(e: NumericsError) -> Self {
        EvalError::Numerics(e)
    }
}

/// Which portion of the data a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitTag {
    Fit,
    Train,
    Test,
}

impl SplitTag {
    pub fn name(self) -> &'static str {
        match self {
            SplitTag::Fit => "fit",
            SplitTag::Train => "train",
            SplitTag::Test => "test",
        }
    }
}

/// Clustering quality of one embedding against its true labels.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub misclassification: f64,
    /// Best bijection cluster index -> label index.
    pub best_label_map: Vec<usize>,
    /// K x r latent-space cluster centroids.
    pub centroids: Matrix,
    /// K x K Euclidean distances between centroids.
    pub centroid_distances: Matrix,
    pub split: SplitTag,
}

/// Ward-cluster an embedding, score it against the labels, and report the
/// centroid geometry.
pub fn evaluate(
    embedding: &LatentEmbedding,
    labels: &[usize],
    split: SplitTag,
) -> Result<(EvalReport, ClusterAssignment), EvalError> {
    if labels.len() != embedding.len() {
        return Err(EvalError::Domain(format!(
            "{} labels for {} embedded samples",
            labels.len(),
            embedding.len()
        )));
    }
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    if k < 2 {
        return Err(EvalError::Domain(
            "evaluation needs at least 2 classes".into(),
        ));
    }
    let assignment =
        ward_cluster(embedding.vectors(), k)?.with_ids(embedding.sample_ids().to_vec())?;
    let (rate, best_map) = misclassification(&assignment, embedding.sample_ids(), labels)?;
    let report = centroid_report(embedding, &assignment)?;
    Ok((
        EvalReport {
            misclassification: rate,
            best_label_map: best_map,
            centroids: report.centroids,
            centroid_distances: report.distances,
            split,
        },
        assignment,
    ))
}
