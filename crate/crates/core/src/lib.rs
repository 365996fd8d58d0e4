//! Knowledge-integrated autoencoder (KiAE) library.
//!
//! An LSTM-based autoencoder whose latent space is trained to preserve
//! expert-declared pairwise distances, plus the machinery around it:
//!
//! * [`numerics`] — dense matrices, seeded randomness, symmetric
//!   eigendecomposition, and finite-difference gradient checking.
//! * [`data`] — datasets, CSV ingestion, synthetic cluster generation,
//!   train/test/fold splitting, and sliding-window plans.
//! * [`knowledge`] — the pairwise-distance knowledge matrix: construction
//!   from labels, k-NN completion of missing entries, and noise corruption.
//! * [`model`] — the autoencoder itself: BiLSTM encoder, LSTM decoder, the
//!   joint reconstruction/distance loss with exact gradients, Adam training,
//!   and checkpointing.
//! * [`eval`] — Ward clustering, permutation-optimal misclassification,
//!   PCA projection, farthest-first subsampling, and centroid reports.

pub mod data;
pub mod eval;
pub mod knowledge;
pub mod model;
pub mod numerics;

pub use data::{Dataset, FeatureKind, SplitSpec, SyntheticProfile, WindowPlan};
pub use eval::{ClusterAssignment, EvalReport};
pub use knowledge::{GammaTable, KnowledgeMatrix, PairMetricSet};
pub use model::{KiaeConfig, KiaeModel, LatentEmbedding, SequenceMode};
pub use numerics::{Matrix, RngState};
