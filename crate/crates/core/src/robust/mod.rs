//! Robust estimation over correspondence sets: weighted histogram voting
//! and plain adaptive RANSAC, plus the Sampson residual both rely on.

mod ransac;
mod residual;
mod voting;

pub use ransac::{
    count_inliers, ransac_estimate, ransac_iterations, select_best_supported, RansacConfig,
    RansacResult,
};
pub use residual::{candidate_residual_px, sampson_error_px, DEGENERATE_DENOMINATOR};
pub use voting::{histogram_vote, random_outlier, VoteConfig, VoteHistogram};

use crate::solvers::SolverKind;
use thiserror::Error;

/// Errors raised by the robust estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum RobustError {
    /// The Sampson denominator vanished (points at the epipoles).
    #[error("degenerate residual: epipolar line gradients vanish")]
    DegenerateResidual,
    /// A non-positive focal length was supplied for pixel scaling.
    #[error("focal length must be positive, got {0}")]
    InvalidFocal(f64),
    /// Histogram voting requires a one-point solver.
    #[error("histogram voting does not support the {0} solver")]
    UnsupportedSolver(SolverKind),
    /// No correspondence produced a vote.
    #[error("no votes: every correspondence failed to solve")]
    NoVotes,
    /// No sample produced a valid model.
    #[error("no model: every sample failed to solve")]
    NoModel,
}
