//! Synthetic benchmark harness: plane scenes, pixel noise, homography-derived
//! affinities and noise sweeps with aggregated error statistics.

mod homography_fit;
mod scene;
mod sweep;

pub use homography_fit::{fit_homography_dlt, homography_distance, planar_homography};
pub use scene::{
    corrupt_planarity, generate_scene, generate_scene_with_rng, sample_motion, SceneConfig,
    SyntheticScene,
};
pub use sweep::{run_sweep, RobustMode, SweepRow, TrialResult};

use thiserror::Error;

/// Errors raised by the synthetic harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    /// Configuration violates the protocol preconditions.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// No plane visible to both cameras was found within the attempt budget.
    #[error("no valid scene geometry found in 100 attempts")]
    GeometryRejection,
}
