//! The domain-knowledge distance matrix: construction from labels,
//! completion of missing entries by a k-nearest-neighbor regressor over
//! pair metrics, noise corruption, and subsetting.

mod dr;
mod io;
mod matrix;
mod metrics;

pub use dr::fill_missing_dr;
pub use io::{load_knowledge_csv, save_knowledge_csv};
pub use matrix::{build_from_labels, corrupt_noisy, GammaTable, KnowledgeMatrix};
pub use metrics::PairMetricSet;

use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum KnowledgeError {
    /// The operation needs a fully labeled dataset.
    Unlabeled,
    /// Not enough known off-diagonal pairs to fit the distance regressor.
    TooFewKnownPairs {
        known: usize,
        minimum: usize,
    },
    Domain(String),
    /// Malformed knowledge-matrix file; row/col are 1-based cell positions.
    Format {
        path: PathBuf,
        row: usize,
        col: usize,
        message: String,
    },
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl fmt::Display for KnowledgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnowledgeError::Unlabeled => {
                write!(f, "knowledge construction requires a fully labeled dataset")
            }
            KnowledgeError::TooFewKnownPairs { known, minimum } => write!(
                f,
                "distance regressor needs at least {minimum} known off-diagonal pairs, found {known}"
            ),
            KnowledgeError::Domain(msg) => write!(f, "{msg}"),
            KnowledgeError::Format { path, row, col, message } => write!(
                f,
                "{} (row {row}, col {col}): {message}",
                path.display()
            ),
            KnowledgeError::Io { path, source } => {
                write!(f, "I/O error on {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for KnowledgeError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            KnowledgeError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
