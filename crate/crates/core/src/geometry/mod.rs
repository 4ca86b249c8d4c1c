//! Domain types and closed-form constructions for planar camera motion:
//! essential/fundamental matrices, homography linearization and the error
//! metrics used by the synthetic benchmarks.

mod angles;
mod essential;
mod homography;
mod metrics;
mod types;

pub use angles::{angle_difference, angles_equal, wrap_angle};
pub use essential::{EssentialMatrix, FundamentalMatrix, PLANAR_PATTERN_TOLERANCE};
pub use homography::{affine_from_homography, apply_homography, INFINITY_TOLERANCE};
pub use metrics::{rotation_error_deg, translation_error_deg};
pub use types::{
    AffineCorrespondence, CameraIntrinsics, NormalizedPoint, PlanarMotion, COORDINATE_BOUND,
};

use thiserror::Error;

/// Errors from geometric constructions and metric evaluations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    /// The matrix misses the planar-motion zero pattern.
    #[error("matrix violates the planar zero pattern (defect {found:.3e}, tolerance {tolerance:.3e})")]
    NonPlanarPattern { found: f64, tolerance: f64 },
    /// A focal length was zero, negative or non-finite.
    #[error("focal length must be positive and finite, got {0}")]
    InvalidFocal(f64),
    /// A point maps to the line at infinity under a homography.
    #[error("point maps to infinity under the homography (w = {0:.3e})")]
    AtInfinity(f64),
    /// A matrix failed the orthonormality / determinant check.
    #[error("matrix is not a proper rotation (defect {0:.3e})")]
    NotARotation(f64),
    /// A direction vector was numerically zero.
    #[error("direction vector is numerically zero")]
    ZeroVector,
    /// An image point was non-finite or out of the sanity bound.
    #[error("invalid image point ({x}, {y})")]
    InvalidPoint { x: f64, y: f64 },
    /// The local affinity of a correspondence is (near-)singular.
    #[error("degenerate local affinity (det = {0:.3e})")]
    DegenerateAffinity(f64),
}
