//! The knowledge-integrated autoencoder: BiLSTM encoder, FC bottleneck,
//! LSTM decoder, the joint reconstruction/distance loss with exact
//! gradients, Adam training, and checkpointing.

mod checkpoint;
mod config;
mod network;
mod params;
mod reconstruct;
mod tape;
mod train;

pub use config::{KiaeConfig, ReprActivation, SequenceMode};
pub use network::{KiaeModel, LatentEmbedding};
pub use reconstruct::aggregate_windows;
pub use train::train;

use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum ModelError {
    /// Input dimensions do not match the model configuration.
    Shape(String),
    Domain(String),
    /// Training produced a non-finite loss.
    Divergence {
        epoch: usize,
        batch: usize,
    },
    /// Malformed checkpoint file.
    Checkpoint {
        path: PathBuf,
        message: String,
    },
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Shape(msg) => write!(f, "shape error: {msg}"),
            ModelError::Domain(msg) => write!(f, "{msg}"),
            ModelError::Divergence { epoch, batch } => {
                write!(
                    f,
                    "training diverged: non-finite loss at epoch {epoch}, batch {batch}"
                )
            }
            ModelError::Checkpoint { path, message } => {
                write!(f, "bad checkpoint {}: {message}", path.display())
            }
            ModelError::Io { path, source } => {
                write!(f, "I/O error on {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for ModelError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ModelError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}
