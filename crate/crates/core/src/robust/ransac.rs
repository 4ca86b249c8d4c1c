//! Plain adaptive RANSAC over affine correspondences.

use rand::{Rng, RngExt};

use crate::geometry::AffineCorrespondence;
use crate::solvers::{cheirality_select, MotionCandidate, SolverKind};

use super::residual::candidate_residual_px;
use super::RobustError;

/// Parameters of [`ransac_estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RansacConfig {
    /// Required confidence eta in (0, 1).
    pub confidence: f64,
    /// Inlier threshold in pixels (divided by the focal length to compare
    /// against normalized residuals).
    pub threshold_px: f64,
    /// Hard cap on the adaptive iteration bound.
    pub max_iterations: usize,
    /// Focal length used to express residuals of calibrated models in
    /// pixels; semi-calibrated models use their own focal estimate.
    pub focal_px: f64,
}

impl Default for RansacConfig {
    fn default() -> Self {
        Self {
            confidence: 0.99,
            threshold_px: 1.0,
            max_iterations: 10_000,
            focal_px: 600.0,
        }
    }
}

/// Theoretical RANSAC iteration count: the smallest number of random
/// minimal samples such that at least one is outlier-free with probability
/// `confidence`, given the inlier ratio and the sample size.
pub fn ransac_iterations(sample_size: usize, inlier_ratio: f64, confidence: f64) -> usize {
    assert!(sample_size >= 1, "sample size must be positive");
    assert!(
        inlier_ratio > 0.0 && inlier_ratio <= 1.0,
        "inlier ratio must be in (0, 1]"
    );
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    if inlier_ratio >= 1.0 {
        return 1;
    }
    let good_sample = inlier_ratio.powi(sample_size as i32);
    if good_sample <= f64::MIN_POSITIVE {
        return usize::MAX;
    }
    let iters = (1.0 - confidence).ln() / (1.0 - good_sample).ln();
    iters.ceil() as usize
}

/// Result of a robust estimation run.
#[derive(Debug, Clone)]
pub struct RansacResult {
    pub candidate: MotionCandidate,
    /// Per-correspondence inlier mask of the returned model.
    pub inlier_mask: Vec<bool>,
    pub inlier_count: usize,
    /// Number of minimal samples drawn.
    pub iterations: usize,
}

/// Adaptive RANSAC: draws uniform minimal samples, solves, disambiguates by
/// cheirality, scores by Sampson inlier count and shrinks the iteration
/// bound from the best inlier ratio seen so far. The final model is
/// re-selected among all candidates of the best sample by inlier count.
pub fn ransac_estimate<R: Rng>(
    correspondences: &[AffineCorrespondence],
    solver: SolverKind,
    config: &RansacConfig,
    rng: &mut R,
) -> Result<RansacResult, RobustError> {
    let m = solver.sample_size();
    let n = correspondences.len();
    if n < m {
        return Err(RobustError::NoModel);
    }

    let mut best: Option<(usize, MotionCandidate, Vec<AffineCorrespondence>)> = None;
    let mut bound = config.max_iterations.max(1);
    let mut iterations = 0;
    let mut sample = Vec::with_capacity(m);

    while iterations < bound {
        iterations += 1;
        draw_sample(rng, n, m, &mut sample);
        let picked: Vec<AffineCorrespondence> =
            sample.iter().map(|&i| correspondences[i]).collect();
        let Ok(candidates) = solver.solve(&picked) else {
            continue;
        };
        let Ok(model) = cheirality_select(&candidates, &picked) else {
            continue;
        };
        let count = count_inliers(&model.motion, correspondences, config).0;
        let improved = best.as_ref().is_none_or(|(c, _, _)| count > *c);
        if improved {
            let ratio = count as f64 / n as f64;
            if ratio > 0.0 {
                bound = bound.min(ransac_iterations(m, ratio, config.confidence));
            }
            best = Some((count, model, picked));
        }
    }

    let (_, _, best_sample) = best.ok_or(RobustError::NoModel)?;

    // Re-score every candidate of the winning sample over all data.
    let candidates = solver
        .solve(&best_sample)
        .expect("winning sample solved before");
    let (candidate, inlier_count, inlier_mask) =
        select_best_supported(&candidates, correspondences, config);
    Ok(RansacResult {
        candidate,
        inlier_mask,
        inlier_count,
        iterations,
    })
}

/// Picks the candidate with the largest Sampson inlier count over
/// `correspondences`. Sign twins share identical residuals (`E` vs `-E`),
/// so count ties fall back to cheirality over the candidate's own inliers,
/// then to the algebraic residual.
pub fn select_best_supported(
    candidates: &crate::solvers::CandidateSet,
    correspondences: &[AffineCorrespondence],
    config: &RansacConfig,
) -> (MotionCandidate, usize, Vec<bool>) {
    let mut best: Option<(usize, usize, MotionCandidate, Vec<bool>)> = None;
    for cand in candidates {
        let (count, mask) = count_inliers(&cand.motion, correspondences, config);
        let inliers: Vec<AffineCorrespondence> = mask
            .iter()
            .zip(correspondences)
            .filter_map(|(&keep, ac)| keep.then_some(*ac))
            .collect();
        // Cheirality over the supporting points; over everything when no
        // point is within the threshold.
        let in_front = if inliers.is_empty() {
            crate::solvers::positive_depth_count(&cand.motion, correspondences)
        } else {
            crate::solvers::positive_depth_count(&cand.motion, &inliers)
        };
        let better = match &best {
            None => true,
            Some((c, f, m, _)) => {
                (count, in_front) > (*c, *f)
                    || ((count, in_front) == (*c, *f) && cand.residual < m.residual)
            }
        };
        if better {
            best = Some((count, in_front, *cand, mask));
        }
    }
    let (count, _, candidate, mask) = best.expect("non-empty candidate set");
    (candidate, count, mask)
}

/// Inlier count and mask of a motion over all correspondences.
pub fn count_inliers(
    motion: &crate::geometry::PlanarMotion,
    correspondences: &[AffineCorrespondence],
    config: &RansacConfig,
) -> (usize, Vec<bool>) {
    let mut mask = vec![false; correspondences.len()];
    let mut count = 0;
    for (flag, ac) in mask.iter_mut().zip(correspondences) {
        if let Ok(err) = candidate_residual_px(motion, ac, config.focal_px) {
            if err < config.threshold_px {
                *flag = true;
                count += 1;
            }
        }
    }
    (count, mask)
}

fn draw_sample<R: Rng>(rng: &mut R, n: usize, m: usize, sample: &mut Vec<usize>) {
    sample.clear();
    while sample.len() < m {
        let idx = rng.random_range(0..n);
        if !sample.contains(&idx) {
            sample.push(idx);
        }
    }
}
