//! Dense matrix arithmetic, seeded randomness, and gradient verification.
//!
//! Everything downstream builds on this module. All storage is row-major
//! `f64`; matrices are small (desk scale) so there is no sparse path and no
//! parallelism. Matrices are immutable in practice once built and safe to
//! share across threads; [`RngState`] is single-owner.

mod eigen;
mod grad;
mod matrix;
mod rng;

pub use eigen::sym_eigen;
pub use grad::finite_diff_grad;
pub(crate) use matrix::euclidean;
pub use matrix::Matrix;
pub use rng::RngState;

use std::fmt;

/// Errors from the numeric kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericsError {
    /// Operand shapes do not conform for the named operation.
    ShapeMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    /// An argument is outside the operation's domain.
    Domain(String),
    /// A value that must be finite is NaN or infinite.
    NonFinite(String),
    /// The input to a symmetric-only routine is not symmetric.
    NotSymmetric { max_asymmetry: f64 },
}

impl fmt::Display for NumericsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericsError::ShapeMismatch { op, lhs, rhs } => write!(
                f,
                "shape mismatch in {op}: left is {}x{}, right is {}x{}",
                lhs.0, lhs.1, rhs.0, rhs.1
            ),
            NumericsError::Domain(msg) => write!(f, "domain error: {msg}"),
            NumericsError::NonFinite(msg) => write!(f, "non-finite value: {msg}"),
            NumericsError::NotSymmetric { max_asymmetry } => {
                write!(
                    f,
                    "matrix is not symmetric (max |a_ij - a_ji| = {max_asymmetry:e})"
                )
            }
        }
    }
}

impl std::error::Error for NumericsError {}
