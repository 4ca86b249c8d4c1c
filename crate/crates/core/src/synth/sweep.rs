//! Noise sweeps: repeated trials per noise level with aggregated error
//! statistics, deterministic under the configured seed.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::geometry::{rotation_error_deg, translation_error_deg, PlanarMotion};
use crate::robust::{
    histogram_vote, ransac_estimate, select_best_supported, RansacConfig, VoteConfig,
};
use crate::solvers::SolverKind;

use super::scene::{generate_scene_with_rng, sample_motion, SceneConfig, SyntheticScene};
use super::SynthError;

/// Robust layer applied on top of a solver during a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RobustMode {
    /// Solve the first minimal sample of each scene.
    None,
    /// Weighted histogram voting over all correspondences.
    Histogram,
    /// Adaptive RANSAC over all correspondences.
    Ransac,
}

impl std::str::FromStr for RobustMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(RobustMode::None),
            "hist" => Ok(RobustMode::Histogram),
            "ransac" => Ok(RobustMode::Ransac),
            other => Err(format!(
                "unknown robust mode '{other}' (expected none, hist or ransac)"
            )),
        }
    }
}

/// Outcome of one (solver, trial) estimation.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub solver: SolverKind,
    pub sigma_px: f64,
    pub ground_truth: PlanarMotion,
    pub estimate: Option<PlanarMotion>,
    pub rotation_error_deg: Option<f64>,
    pub translation_error_deg: Option<f64>,
    /// `|f_est - f_gt| / f_gt`; present only for semi-calibrated solvers.
    pub focal_relative_error: Option<f64>,
    pub wall_time: Duration,
}

/// Aggregated statistics of one (solver, sigma) cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub solver: SolverKind,
    pub sigma_px: f64,
    pub trials: usize,
    pub failures: usize,
    pub mean_rotation_deg: f64,
    pub std_rotation_deg: f64,
    pub mean_translation_deg: f64,
    pub std_translation_deg: f64,
    pub mean_focal_relative: Option<f64>,
    pub std_focal_relative: Option<f64>,
    pub fail_rate: f64,
    pub mean_wall_ms: f64,
}

/// Runs `config.trials` trials per (solver, sigma) pair: sample a motion,
/// generate a scene, estimate, score against the planar ground truth.
/// Per-trial failures are counted, never fatal. Identical seeds give
/// identical estimates (timing aside).
///
/// Noise levels share common random numbers: trial `k` reuses the same RNG
/// stream at every sigma, so the same scene receives the same unit noise
/// draws scaled by sigma and level-to-level comparisons are paired.
pub fn run_sweep(
    config: &SceneConfig,
    solvers: &[SolverKind],
    sigmas: &[f64],
    robust: RobustMode,
) -> Result<Vec<SweepRow>, SynthError> {
    config.validate()?;
    if solvers.is_empty() || sigmas.is_empty() {
        return Err(SynthError::InvalidConfig(
            "solver and sigma lists must be non-empty".into(),
        ));
    }
    let mut rows = Vec::with_capacity(solvers.len() * sigmas.len());
    for &sigma in sigmas {
        if sigma < 0.0 {
            return Err(SynthError::InvalidConfig(format!(
                "noise sigma must be non-negative, got {sigma}"
            )));
        }
        let mut per_solver: Vec<Vec<TrialResult>> =
            vec![Vec::with_capacity(config.trials); solvers.len()];
        for trial in 0..config.trials {
            // Independent per-trial stream split off the master seed;
            // shared across sigmas for paired comparisons.
            let mut rng = StdRng::seed_from_u64(mix_seed(config.seed, trial as u64));
            let scene_config = SceneConfig {
                noise_sigma_px: sigma,
                ..config.clone()
            };
            let motion = sample_motion(&scene_config, &mut rng);
            let scene = generate_scene_with_rng(&scene_config, &motion, &mut rng);
            for (solver_idx, &solver) in solvers.iter().enumerate() {
                let result = match &scene {
                    Ok(scene) => run_trial(solver, robust, scene, &motion, sigma, &mut rng),
                    Err(_) => failed_trial(solver, sigma, &motion),
                };
                per_solver[solver_idx].push(result);
            }
        }
        for (solver_idx, &solver) in solvers.iter().enumerate() {
            rows.push(aggregate(solver, sigma, &per_solver[solver_idx]));
        }
    }
    Ok(rows)
}

/// A random `count`-sample drawn from the three quarters of the
/// correspondences farthest from the Y = 0 horizon.
fn conditioned_sample<R: rand::Rng>(
    acs: &[crate::geometry::AffineCorrespondence],
    count: usize,
    rng: &mut R,
) -> Vec<crate::geometry::AffineCorrespondence> {
    use rand::RngExt;
    let mut sorted: Vec<_> = acs.to_vec();
    sorted.sort_by(|a, b| b.p1.y.abs().partial_cmp(&a.p1.y.abs()).expect("finite points"));
    let pool = ((sorted.len() * 3).div_ceil(4)).max(count).min(sorted.len());
    let mut picked: Vec<usize> = Vec::with_capacity(count);
    while picked.len() < count {
        let idx = rng.random_range(0..pool);
        if !picked.contains(&idx) {
            picked.push(idx);
        }
    }
    picked.into_iter().map(|i| sorted[i]).collect()
}

fn mix_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 over the packed indices.
    let mut z = seed
        .wrapping_add(trial.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(0x94d0_49bb_1331_11eb);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn failed_trial(solver: SolverKind, sigma: f64, motion: &PlanarMotion) -> TrialResult {
    TrialResult {
        solver,
        sigma_px: sigma,
        ground_truth: *motion,
        estimate: None,
        rotation_error_deg: None,
        translation_error_deg: None,
        focal_relative_error: None,
        wall_time: Duration::ZERO,
    }
}

/// Focal estimates outside this window (matching the voting histogram's
/// focal range) mark a semi-calibrated trial as failed instead of letting a
/// single `tan`-blowup candidate dominate the aggregated means.
const PLAUSIBLE_FOCAL_PX: std::ops::RangeInclusive<f64> = 100.0..=5000.0;

fn run_trial(
    solver: SolverKind,
    robust: RobustMode,
    scene: &SyntheticScene,
    motion: &PlanarMotion,
    sigma: f64,
    rng: &mut StdRng,
) -> TrialResult {
    let acs = scene.for_solver(solver);
    let support_config = RansacConfig {
        focal_px: scene.intrinsics.fx,
        // Noise-free trials separate exact roots from spurious ones at any
        // threshold above rounding; the two-point solver's second root can
        // tie a loose pixel threshold otherwise.
        threshold_px: if sigma == 0.0 { 1e-6 } else { RansacConfig::default().threshold_px },
        ..RansacConfig::default()
    };
    let start = Instant::now();
    let estimate = match robust {
        RobustMode::None => {
            let m = solver.sample_size();
            if acs.len() < m {
                None
            } else {
                // Random minimal sample gated away from the Y = 0 horizon,
                // where points satisfy the planar epipolar constraint for
                // every motion and give useless samples. The candidate is
                // disambiguated by its epipolar support over the whole
                // scene (the two-point solver can produce a second exact
                // root) and cheirality.
                let sample = conditioned_sample(&acs, m, rng);
                solver
                    .solve(&sample)
                    .ok()
                    .map(|cands| select_best_supported(&cands, &acs, &support_config).0.motion)
            }
        }
        RobustMode::Histogram => histogram_vote(&acs, solver, &VoteConfig::default())
            .ok()
            .map(|(m, _)| m),
        RobustMode::Ransac => ransac_estimate(&acs, solver, &support_config, rng)
            .ok()
            .map(|r| r.candidate.motion),
    };
    let wall_time = start.elapsed();
    let estimate = estimate.filter(|est| match est.focal() {
        Some(f) => PLAUSIBLE_FOCAL_PX.contains(&f),
        None => true,
    });

    let mut result = TrialResult {
        solver,
        sigma_px: sigma,
        ground_truth: *motion,
        estimate,
        rotation_error_deg: None,
        translation_error_deg: None,
        focal_relative_error: None,
        wall_time,
    };
    if let Some(est) = estimate {
        result.rotation_error_deg =
            rotation_error_deg(&est.rotation(), &motion.rotation()).ok();
        result.translation_error_deg =
            translation_error_deg(&est.translation(), &motion.translation()).ok();
        if solver.semi_calibrated() {
            result.focal_relative_error = est
                .focal()
                .map(|f| (f - scene.intrinsics.fx).abs() / scene.intrinsics.fx);
        }
    }
    result
}

fn aggregate(solver: SolverKind, sigma: f64, trials: &[TrialResult]) -> SweepRow {
    let ok: Vec<&TrialResult> = trials
        .iter()
        .filter(|t| t.rotation_error_deg.is_some() && t.translation_error_deg.is_some())
        .collect();
    let failures = trials.len() - ok.len();
    let rot: Vec<f64> = ok.iter().filter_map(|t| t.rotation_error_deg).collect();
    let tr: Vec<f64> = ok.iter().filter_map(|t| t.translation_error_deg).collect();
    let focal: Vec<f64> = ok.iter().filter_map(|t| t.focal_relative_error).collect();
    let (mean_rot, std_rot) = mean_std(&rot);
    let (mean_tr, std_tr) = mean_std(&tr);
    let (mean_focal, std_focal) = if solver.semi_calibrated() && !focal.is_empty() {
        let (m, s) = mean_std(&focal);
        (Some(m), Some(s))
    } else {
        (None, None)
    };
    let mean_ms = if ok.is_empty() {
        0.0
    } else {
        ok.iter().map(|t| t.wall_time.as_secs_f64() * 1e3).sum::<f64>() / ok.len() as f64
    };
    SweepRow {
        solver,
        sigma_px: sigma,
        trials: trials.len(),
        failures,
        mean_rotation_deg: mean_rot,
        std_rotation_deg: std_rot,
        mean_translation_deg: mean_tr,
        std_translation_deg: std_tr,
        mean_focal_relative: mean_focal,
        std_focal_relative: std_focal,
        fail_rate: failures as f64 / trials.len().max(1) as f64,
        mean_wall_ms: mean_ms,
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (values.len() - 1) as f64;
    (mean, var.sqrt())
}
