//! Minimal solvers for planar motion.
//!
//! Four estimators share the constraint machinery of [`constraint`]:
//!
//! * `1ac` — calibrated, one affine correspondence ([`solve_1ac`]);
//! * `1acf` — semi-calibrated with a common unknown focal length, one
//!   affine correspondence ([`solve_1acf`]);
//! * `3pc` — linear baseline from three point pairs ([`solve_3pc`]);
//! * `2pc` — baseline from two point pairs ([`solve_2pc`]).
//!
//! All of them return sign-ambiguous hypothesis sets; [`cheirality_select`]
//! picks the candidate placing triangulated points in front of both
//! cameras.

mod calibrated;
mod candidate;
mod cheirality;
mod constraint;
mod focal;

pub use calibrated::{solve_1ac, solve_2pc, solve_3pc};
pub use candidate::{CandidateSet, MotionCandidate};
pub use cheirality::{cheirality_select, positive_depth_count};
pub use constraint::{
    affinity_rows, epipolar_row, trig_vector, ConstraintMatrix, NullVector, RANK_TOLERANCE,
};
pub use focal::{solve_1acf, SINGULAR_SYSTEM_TOLERANCE};

use crate::geometry::{AffineCorrespondence, GeometryError};
use thiserror::Error;

/// Errors raised by the minimal solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    /// The constraint system lost rank (coincident constraints, zero
    /// affinity rows, collinear configurations, ...).
    #[error("degenerate input: constraint rank {rank} below {needed}")]
    DegenerateInput { rank: usize, needed: usize },
    /// The correspondence violates its own invariants.
    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(#[source] GeometryError),
    /// Fewer correspondences than the minimal sample size.
    #[error("need {needed} correspondences, got {got}")]
    InsufficientInput { needed: usize, got: usize },
    /// The squared 2x2 focal system is singular (e.g. rotation-free motion).
    #[error("singular semi-calibrated system (determinant {determinant:.3e})")]
    SingularSystem { determinant: f64 },
    /// Every sign permutation was rejected by the focal positivity check.
    #[error("no candidate with a positive focal length")]
    NoValidFocal,
    /// The two-point quadratic has no real root.
    #[error("no real solution to the norm-balance constraint")]
    NoRealSolution,
    /// Empty candidate set passed to disambiguation.
    #[error("no candidate to select from")]
    NoCandidate,
}

/// The estimator family, used by the robust layers, the benchmark harness
/// and the CLI to dispatch on a solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Calibrated single-affine-correspondence solver (`1ac`).
    SingleAffine,
    /// Semi-calibrated single-affine-correspondence solver (`1acf`).
    SingleAffineFocal,
    /// Linear three-point baseline (`3pc`).
    ThreePoint,
    /// Two-point baseline (`2pc`).
    TwoPoint,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [
        SolverKind::SingleAffine,
        SolverKind::SingleAffineFocal,
        SolverKind::ThreePoint,
        SolverKind::TwoPoint,
    ];

    /// Number of correspondences in a minimal sample.
    pub fn sample_size(&self) -> usize {
        match self {
            SolverKind::SingleAffine | SolverKind::SingleAffineFocal => 1,
            SolverKind::TwoPoint => 2,
            SolverKind::ThreePoint => 3,
        }
    }

    /// Whether the solver consumes pixel-frame (principal-point-centered)
    /// correspondences instead of normalized ones.
    pub fn semi_calibrated(&self) -> bool {
        matches!(self, SolverKind::SingleAffineFocal)
    }

    /// Runs the solver on a minimal sample.
    pub fn solve(&self, sample: &[AffineCorrespondence]) -> Result<CandidateSet, SolverError> {
        match self {
            SolverKind::SingleAffine => {
                let ac = sample.first().ok_or(SolverError::InsufficientInput {
                    needed: 1,
                    got: 0,
                })?;
                solve_1ac(ac)
            }
            SolverKind::SingleAffineFocal => {
                let ac = sample.first().ok_or(SolverError::InsufficientInput {
                    needed: 1,
                    got: 0,
                })?;
                solve_1acf(ac)
            }
            SolverKind::ThreePoint => solve_3pc(sample),
            SolverKind::TwoPoint => solve_2pc(sample),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::SingleAffine => "1ac",
            SolverKind::SingleAffineFocal => "1acf",
            SolverKind::ThreePoint => "3pc",
            SolverKind::TwoPoint => "2pc",
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1ac" => Ok(SolverKind::SingleAffine),
            "1acf" => Ok(SolverKind::SingleAffineFocal),
            "3pc" => Ok(SolverKind::ThreePoint),
            "2pc" => Ok(SolverKind::TwoPoint),
            other => Err(format!(
                "unknown solver '{other}' (expected 1ac, 1acf, 3pc or 2pc)"
            )),
        }
    }
}
