//! Planar relative camera motion from affine correspondences.
//!
//! When a camera pair moves on a common ground plane with vertical image
//! axes (the usual vehicle-mounted setup), the relative pose collapses to
//! two degrees of freedom: a yaw angle `alpha` and a translation direction
//! `beta`. A single affine correspondence - a point match plus the 2x2
//! local warp between the two image neighborhoods - carries exactly enough
//! constraints to recover both, and even a common unknown focal length.
//!
//! The crate provides:
//!
//! * [`geometry`] - domain types, planar essential/fundamental matrices,
//!   homography linearization and benchmark error metrics;
//! * [`solvers`] - the minimal solvers (`1ac`, `1acf`) and the point-based
//!   baselines (`3pc`, `2pc`), plus cheirality disambiguation;
//! * [`robust`] - weighted histogram voting and adaptive RANSAC over many
//!   correspondences;
//! * [`synth`] - a synthetic scene generator and noise-sweep benchmark
//!   harness.

pub mod geometry;
pub mod robust;
pub mod solvers;
pub mod synth;

pub use geometry::{
    AffineCorrespondence, CameraIntrinsics, EssentialMatrix, FundamentalMatrix, GeometryError,
    NormalizedPoint, PlanarMotion,
};
pub use robust::{RansacConfig, RobustError, VoteConfig, VoteHistogram};
pub use solvers::{CandidateSet, MotionCandidate, SolverError, SolverKind};
pub use synth::{SceneConfig, SynthError, SyntheticScene};
