//! Numerical toolkit for phase-estimation metrology: quantum Fisher
//! information (closed-form and symmetric-logarithmic-derivative routes),
//! l1-norm coherence, a generalized coherence quantifier whose square
//! reproduces the Fisher information, and a Monte-Carlo simulator for the
//! full prepare / evolve / measure pipeline including Pauli-basis tomography
//! and Cramér-Rao bound checks.
//!
//! All operations are pure functions of their inputs; randomized routines
//! take an explicit [`states::RngSeed`] and are bit-reproducible.

pub mod error;
pub mod estimation;
pub mod io;
pub mod linalg;
pub mod metrology;
pub mod states;

pub use error::{Error, Result};
pub use estimation::{
    classical_fisher, linear_grid, outcome_distribution, replicate_experiment, run_estimation,
    tomography, EstimationRun, ExperimentReport, MeasurementBasis, TomographyResult,
};
pub use linalg::{
    eigh, evolve_unitary, kron, ComplexMatrix, HermitianOperator, SpectralDecomposition,
};
pub use metrology::{
    gqc_mixed, gqc_pure, gqc_pure_alt, l1_coherence, l1_coherence_in_eigenbasis, qfi_mixed,
    qfi_pure, sld_qfi, verify_identity, CoherenceBasis, GqcReport, Hamiltonian, IdentitySummary,
    PairTerm, SldOperator, SummandSign, VerifyMode,
};
pub use states::{
    pure_to_density, random_haar_pure, random_mixed, trace_distance, DensityMatrix, PureState,
    RngSeed,
};
