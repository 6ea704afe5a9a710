//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by state construction, linear algebra, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {len} does not match {rows}x{cols}")]
    BadEntryCount { len: usize, rows: usize, cols: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} is too small, need at least 2")]
    DimensionTooSmall { dim: usize },

    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("state vector is not normalized: |norm - 1| = {defect:.3e}")]
    NotNormalized { defect: f64 },

    #[error("density matrix trace deviates from 1 by {defect:.3e}")]
    TraceDefect { defect: f64 },

    #[error("density matrix is not positive semidefinite: eigenvalue {value:.3e}")]
    NotPositive { value: f64 },

    #[error("measurement projectors do not resolve the identity: defect {defect:.3e}")]
    IncompleteBasis { defect: f64 },

    #[error("projector {index} is not positive semidefinite: eigenvalue {value:.3e}")]
    ProjectorNotPositive { index: usize, value: f64 },

    #[error(
        "estimation is not identifiable: classical Fisher information {fisher:.3e} is numerically zero"
    )]
    NonIdentifiable { fisher: f64 },

    #[error("tomography requires a power-of-two dimension, got {dim}")]
    UnsupportedDimension { dim: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("JSON parse error at byte {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
