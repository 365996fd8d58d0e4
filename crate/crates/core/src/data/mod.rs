//! Dataset representation, CSV ingestion, synthetic generation, split
//! management, and sliding-window planning.

mod csv;
mod dataset;
mod split;
mod synthetic;
mod windows;

pub use csv::{load_csv, save_csv};
pub use dataset::{Dataset, FeatureKind};
pub use split::{split, SplitMode, SplitResult, SplitSpec};
pub use synthetic::{generate_synthetic, SyntheticProfile};
pub use windows::{plan_windows, WindowPlan};

use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum DataError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A feature cell failed to parse; row is 1-based counting the header.
    Parse {
        row: usize,
        column: String,
        cell: String,
    },
    /// A row has the wrong number of cells.
    Ragged {
        row: usize,
        expected: usize,
        got: usize,
    },
    Domain(String),
    /// A label class is too small for the requested stratification.
    Stratification {
        label: String,
        count: usize,
        needed: usize,
    },
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataError::Io { path, source } => {
                write!(f, "I/O error on {}: {source}", path.display())
            }
            DataError::Parse { row, column, cell } => {
                write!(f, "row {row}, column \"{column}\": cannot parse \"{cell}\" as a number")
            }
            DataError::Ragged { row, expected, got } => {
                write!(f, "row {row} has {got} cells, expected {expected}")
            }
            DataError::Domain(msg) => write!(f, "{msg}"),
            DataError::Stratification { label, count, needed } => write!(
                f,
                "label class \"{label}\" has {count} samples, fewer than the {needed} required for stratification"
            ),
        }
    }
}

impl std::error::Error for DataError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            DataError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
