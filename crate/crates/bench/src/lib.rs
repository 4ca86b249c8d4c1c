//! Shared fixtures for the solver benchmarks: deterministic synthetic
//! scenes in the frames each estimator consumes.

use acpose::geometry::{AffineCorrespondence, PlanarMotion};
use acpose::robust::random_outlier;
use acpose::synth::{generate_scene_with_rng, SceneConfig, SyntheticScene};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub const FIXTURE_MOTION: (f64, f64) = (0.15, 0.85);

/// A deterministic scene with `points` correspondences at `sigma` pixels of
/// noise.
pub fn fixture_scene(points: usize, sigma: f64, seed: u64) -> SyntheticScene {
    let config = SceneConfig {
        points,
        noise_sigma_px: sigma,
        seed,
        ..SceneConfig::default()
    };
    let motion = PlanarMotion::new(FIXTURE_MOTION.0, FIXTURE_MOTION.1);
    let mut rng = StdRng::seed_from_u64(seed);
    generate_scene_with_rng(&config, &motion, &mut rng).expect("fixture scene generates")
}

/// Normalized correspondences with a trailing block of junk outliers.
pub fn fixture_with_outliers(inliers: usize, outliers: usize, sigma: f64) -> Vec<AffineCorrespondence> {
    let scene = fixture_scene(inliers, sigma, 1234);
    let mut acs = scene.normalized;
    let mut rng = StdRng::seed_from_u64(5678);
    for _ in 0..outliers {
        acs.push(random_outlier(&mut rng, 0.5));
    }
    acs
}
