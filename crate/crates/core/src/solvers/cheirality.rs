//! Candidate disambiguation by cheirality: triangulated points must lie in
//! front of both cameras.

use nalgebra::{Matrix3, Vector3};

use crate::geometry::{AffineCorrespondence, PlanarMotion};

use super::candidate::{CandidateSet, MotionCandidate};
use super::SolverError;

/// Selects the candidate under which the most correspondences triangulate
/// with positive depth in both cameras; ties fall back to the smaller
/// algebraic residual.
///
/// Semi-calibrated candidates (focal length present) expect pixel-frame
/// correspondences and are normalized by their own focal estimate before
/// triangulation; calibrated candidates expect normalized correspondences.
pub fn cheirality_select(
    candidates: &CandidateSet,
    correspondences: &[AffineCorrespondence],
) -> Result<MotionCandidate, SolverError> {
    if candidates.is_empty() {
        return Err(SolverError::NoCandidate);
    }
    let best = candidates
        .iter()
        .max_by(|a, b| {
            let ca = positive_depth_count(&a.motion, correspondences);
            let cb = positive_depth_count(&b.motion, correspondences);
            ca.cmp(&cb)
                .then_with(|| b.residual.partial_cmp(&a.residual).expect("finite residuals"))
        })
        .expect("candidate set is non-empty");
    Ok(*best)
}

/// Number of correspondences whose midpoint triangulation has positive
/// depth in both cameras under `motion`.
pub fn positive_depth_count(motion: &PlanarMotion, correspondences: &[AffineCorrespondence]) -> usize {
    let r = motion.rotation();
    let t = motion.translation();
    let inv_focal = motion.focal().map(|f| 1.0 / f).unwrap_or(1.0);
    correspondences
        .iter()
        .filter(|ac| {
            let q1 = Vector3::new(ac.p1.x * inv_focal, ac.p1.y * inv_focal, 1.0);
            let q2 = Vector3::new(ac.p2.x * inv_focal, ac.p2.y * inv_focal, 1.0);
            matches!(triangulate_depths(&r, &t, &q1, &q2), Some((z1, z2)) if z1 > 0.0 && z2 > 0.0)
        })
        .count()
}

/// Midpoint triangulation returning the depths of the closest-point pair
/// along both rays (the ray parameters are the camera depths because the
/// directions keep a unit third coordinate in their own frames).
fn triangulate_depths(
    r: &Matrix3<f64>,
    t: &Vector3<f64>,
    q1: &Vector3<f64>,
    q2: &Vector3<f64>,
) -> Option<(f64, f64)> {
    // Camera 1 at the origin; camera 2 center and ray direction in world
    // coordinates (x2 = R X + t).
    let c2 = -(r.transpose() * t);
    let d1 = *q1;
    let d2 = r.transpose() * q2;

    let a = d1.dot(&d1);
    let b = d1.dot(&d2);
    let c = d2.dot(&d2);
    let det = b * b - a * c;
    if det.abs() < 1e-14 * a * c {
        return None; // near-parallel rays
    }
    let rhs1 = d1.dot(&c2);
    let rhs2 = d2.dot(&c2);
    // Solve [a -b; b -c] [z1 z2]^T = [rhs1 rhs2]^T.
    let z1 = (-c * rhs1 + b * rhs2) / det;
    let z2 = (-b * rhs1 + a * rhs2) / det;
    Some((z1, z2))
}
