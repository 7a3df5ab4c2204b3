//! Gaussian-state analysis of a two-stage parametric-amplifier ring.
//!
//! A single parametric amplifier two-mode squeezes a pair of vacuum modes.
//! Chaining two stages of amplifiers around a ring of `2N` modes (stage one
//! pumps pairs `(0,1), (2,3), ...`; stage two pumps the staggered pairs
//! `(1,2), (3,4), ..., (2N-1,0)`) produces a pure Gaussian state whose
//! multipartite entanglement this crate quantifies two independent ways:
//!
//! * PPT: the smallest symplectic eigenvalue of the partially transposed
//!   covariance matrix, per bipartition ([`ppt`]);
//! * entropy: the genuine multipartite entanglement entropy, a minimum of
//!   reduced-state von Neumann entropies over subsystems ([`entropy`]).
//!
//! Conventions, fixed everywhere and tagged in serialized output:
//!
//! * quadratures `X = a† + a`, `Y = i(a† - a)`, so `[X, Y] = 2i` and the
//!   vacuum covariance matrix is the identity;
//! * interleaved ordering `(X_0, Y_0, X_1, Y_1, ...)`;
//! * mode indices are 0-based ring positions;
//! * symplectic eigenvalues are reported as `nu = |eig(i Omega sigma)|`
//!   (not `nu^2`); a physical state has every `nu >= 1`;
//! * entropies are in bits, `S = (1/2) sum h(nu)`.

#![forbid(unsafe_code)]

use thiserror::Error;

pub mod entropy;
pub mod moments;
pub mod network;
pub mod ppt;
pub mod symplectic;

pub use entropy::{
    e2n, entropy_difference, gaussian_entropy, reduce_consecutive, reduced_cm, EntropyReport,
    EnumerationMode, Subset, SubsetEntropy,
};
pub use moments::{mean_photon_number, number_difference_variance, variance_ratio_diagonal, MomentsResult};
pub use network::{build_network, closed_form_cm_4, block_of, BlockKind, ClosedFormParams, NetworkSpec};
pub use ppt::{
    classify_partitions, closed_form_nu_1x3, enumerate_bipartitions, gme_verdict, ppt_nu,
    AnalysisReport, Bipartition, PptResult, SymmetryClass,
};
pub use symplectic::{tms_symplectic, CovarianceMatrix, SymplecticForm, SymplecticMatrix, TmsParams};

/// Relative tolerance for structural checks (symmetry, zero blocks).
pub const TOL_STRUCTURAL: f64 = 1e-12;
/// Absolute tolerance on the symplectic condition S Omega S^T = Omega.
pub const TOL_SYMPLECTIC: f64 = 1e-10;
/// Physicality margin: a CM is physical when min nu >= 1 - TOL_PHYSICAL.
pub const TOL_PHYSICAL: f64 = 1e-10;
/// Tolerance for symplectic-eigenvalue comparisons.
pub const TOL_EIGEN: f64 = 1e-9;
/// Tolerance for entropy comparisons (entropy amplifies conditioning near nu = 1).
pub const TOL_ENTROPY: f64 = 1e-8;
/// Relative tolerance when pairing the conjugate eigenvalues of Omega sigma.
pub const PAIR_RTOL: f64 = 1e-8;
/// Inseparability threshold: a bipartition is inseparable when nu < 1 - SEPARABILITY_TOL.
pub const SEPARABILITY_TOL: f64 = 1e-9;
/// Largest mode count accepted by exact bipartition enumeration (32767 bipartitions).
pub const ENUMERATION_GUARD: usize = 16;
/// Largest mode count accepted by the exhaustive-subset entropy minimization.
pub const ALL_SUBSETS_GUARD: usize = 12;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is {0}x{1}, expected square with even dimension")]
    BadShape(usize, usize),
    #[error("matrix is not symmetric: a[{i}][{j}] and a[{j}][{i}] differ by {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("non-finite matrix entry at ({0},{1})")]
    NonFinite(usize, usize),
    #[error("matrix is not symplectic: max |S Omega S^T - Omega| = {0:e}")]
    NotSymplectic(f64),
    #[error("mode count must be at least {1}, got {0}")]
    BadModeCount(usize, usize),
    #[error("mode count {0} must be even and at least 4")]
    BadRingSize(usize),
    #[error("mode index {0} out of range for {1} modes")]
    ModeOutOfRange(usize, usize),
    #[error("duplicate mode index {0}")]
    DuplicateMode(usize),
    #[error("two-mode squeezer needs two distinct modes, got {0} twice")]
    EqualModes(usize),
    #[error("squeezing parameter is not finite")]
    BadSqueezing,
    #[error("stage squeezing must be nonnegative, got {0}")]
    NegativeStageSqueezing(f64),
    #[error("dimension mismatch: {0} modes vs {1} modes")]
    DimensionMismatch(usize, usize),
    #[error("eigenvalue iteration did not converge")]
    EigenFailed,
    #[error("symplectic eigenvalues do not pair: {0} vs {1}")]
    UnpairedEigenvalues(f64, f64),
    #[error("transposing the two sides of a bipartition disagrees: {0} vs {1}")]
    PptSideMismatch(f64, f64),
    #[error("covariance matrix is unphysical: min symplectic eigenvalue {0}")]
    Unphysical(f64),
    #[error("subset of modes is empty")]
    EmptySubset,
    #[error("window is not ring-consecutive")]
    NotConsecutive,
    #[error("{0} modes exceeds the guard of {1} for this analysis")]
    GuardExceeded(usize, usize),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("variance ratio is undefined at s = 0")]
    ZeroSqueezing,
    #[error("covariance file declares ordering {0:?}, expected \"XYXY\"")]
    BadOrdering(String),
    #[error("covariance file declares vacuum variance {0}, expected 1")]
    BadNormalization(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
