//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by constructors and fallible operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A measure space was given an empty atom list.
    #[error("measure space must contain at least one atom")]
    EmptySpace,

    /// An atom mass was zero, negative, or not finite.
    #[error("atom {index} has nonpositive or non-finite mass {mass}")]
    NonpositiveMass { index: usize, mass: f64 },

    /// The block list does not partition the atom index set.
    #[error("blocks do not partition the atom set: {reason}")]
    InvalidPartition { reason: String },

    /// A function or vector does not live on the expected space.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An exponent below 1 was supplied.
    #[error("exponent must satisfy p >= 1, got {p}")]
    ExponentBelowOne { p: f64 },

    /// The operation is not defined at this exponent (p = infinity, or p != 2
    /// for Hilbert-space constructions).
    #[error("unsupported exponent for this operation: {context}")]
    UnsupportedExponent { context: String },

    /// The Neumann closed form requires spectral radius strictly below one.
    #[error("not invertible by Neumann series: spectral radius {radius} >= 1")]
    NotInvertibleByNeumann { radius: f64 },

    /// A matrix inverse was requested for a rank-deficient matrix.
    #[error("singular matrix: rank {rank} < dimension {dim}")]
    SingularMatrix { rank: usize, dim: usize },

    /// A Hermitian/positive-semidefinite precondition failed.
    #[error("matrix is not Hermitian positive semidefinite: {reason}")]
    NotHermitianPsd { reason: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
