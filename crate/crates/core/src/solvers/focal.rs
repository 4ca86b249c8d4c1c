//! Semi-calibrated minimal solver (1ACf): planar motion plus a common
//! unknown focal length from a single affine correspondence.
//!
//! With `C1 = C2 = diag(f, f, 1)` the constraint system of the
//! correspondence, built from pixel-frame quantities (principal point
//! already subtracted), has the null vector
//!
//! ```text
//! n ~ [cos(alpha + beta) / f,  sin(alpha + beta) / f^2,
//!      cos(beta) / f,          sin(beta) / f^2]
//! ```
//!
//! Squaring the two ratio equations hiding `f` yields a linear 2x2 system
//! in `cos^2(alpha + beta)` and `cos^2(beta)`. Each squared cosine admits
//! four signed angles, so 16 permutations are screened; every permutation
//! produces two independent focal estimates whose positivity rejects
//! inconsistent sign choices and whose gap ranks the survivors.

use nalgebra::Vector4;

use crate::geometry::{AffineCorrespondence, PlanarMotion};

use super::candidate::{push_distinct, CandidateSet, MotionCandidate};
use super::constraint::{ConstraintMatrix, NullVector, StackedConstraints};
use super::SolverError;

/// Determinant threshold of the squared 2x2 system (unit-norm null vector).
pub const SINGULAR_SYSTEM_TOLERANCE: f64 = 1e-14;

const DUPLICATE_ANGLE_TOLERANCE: f64 = 1e-9;

/// Estimates planar motion and the common focal length from one affine
/// correspondence given in pixel coordinates centered on the principal
/// point.
///
/// Surviving candidates carry `focal = (f_a + f_b) / 2` and are sorted by
/// the consistency gap `|f_a - f_b|` (ascending).
pub fn solve_1acf(ac: &AffineCorrespondence) -> Result<CandidateSet, SolverError> {
    ac.validate().map_err(SolverError::InvalidCorrespondence)?;
    let b = ConstraintMatrix::from_correspondence(ac);
    // Pixel-frame rows mix entries of order f^2 and of order one;
    // equilibrate so the rank test and the null vector are well scaled.
    let stacked = StackedConstraints::from_constraint_matrix(&b).equilibrated();
    let null = stacked.kernel()?;
    candidates_from_null(&null, &stacked)
}

/// The four signed angle candidates of a squared cosine, clamped into
/// `[0, 1]` first (noise can push it slightly outside; the nearest valid
/// solution is `0` or `+-pi/2`).
pub(crate) fn angle_candidates(cos_sq: f64) -> [f64; 4] {
    let c = cos_sq.clamp(0.0, 1.0).sqrt();
    let base = c.clamp(-1.0, 1.0).acos();
    let mirrored = (-c).clamp(-1.0, 1.0).acos();
    [base, -base, mirrored, -mirrored]
}

pub(crate) fn candidates_from_null(
    null: &NullVector,
    stacked: &StackedConstraints,
) -> Result<CandidateSet, SolverError> {
    let [n1, n2, n3, n4] = null.components();
    let (n1s, n2s, n3s, n4s) = (n1 * n1, n2 * n2, n3 * n3, n4 * n4);
    let det = n3s * n2s - n1s * n4s;
    if det.abs() < SINGULAR_SYSTEM_TOLERANCE {
        return Err(SolverError::SingularSystem { determinant: det });
    }
    let rhs = n2s - n4s;
    let cos_sq_sum = n1s * rhs / det; // cos^2(alpha + beta)
    let cos_sq_beta = n3s * rhs / det; // cos^2(beta)

    let mut candidates: Vec<MotionCandidate> = Vec::new();
    for &sum_angle in &angle_candidates(cos_sq_sum) {
        let focal_a = n1 / n2 * sum_angle.tan();
        if !(focal_a.is_finite() && focal_a > 0.0) {
            continue;
        }
        for &beta in &angle_candidates(cos_sq_beta) {
            let focal_b = n3 / n4 * beta.tan();
            if !(focal_b.is_finite() && focal_b > 0.0) {
                continue;
            }
            let focal = 0.5 * (focal_a + focal_b);
            let Ok(motion) = PlanarMotion::with_focal(sum_angle - beta, beta, focal) else {
                continue;
            };
            let residual = stacked.residual_of(&semi_calibrated_vector(sum_angle, beta, focal));
            push_distinct(
                &mut candidates,
                MotionCandidate {
                    motion,
                    residual,
                    focal_gap: Some((focal_a - focal_b).abs()),
                },
                DUPLICATE_ANGLE_TOLERANCE,
            );
        }
    }
    if candidates.is_empty() {
        return Err(SolverError::NoValidFocal);
    }
    candidates.sort_by(|a, b| {
        a.focal_gap
            .partial_cmp(&b.focal_gap)
            .expect("finite focal gaps")
    });
    Ok(CandidateSet::from_candidates(candidates))
}

/// Unit-norm semi-calibrated unknown vector of a hypothesis.
fn semi_calibrated_vector(sum_angle: f64, beta: f64, focal: f64) -> Vector4<f64> {
    let f2 = focal * focal;
    let v = Vector4::new(
        sum_angle.cos() / focal,
        sum_angle.sin() / f2,
        beta.cos() / focal,
        beta.sin() / f2,
    );
    v / v.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::cheirality_select;
    use crate::test_support::exact_pixel_correspondences;
    use rand::rngs::StdRng;
    use rand::{RngExt, SeedableRng};
    use std::f64::consts::PI;

    #[test]
    fn recovers_motion_and_focal_from_exact_correspondence() {
        let motion = PlanarMotion::new(0.1, 1.0);
        let focal = 600.0;
        let acs = exact_pixel_correspondences(&motion, focal, 1, 42);
        let candidates = solve_1acf(&acs[0]).unwrap();
        let best = cheirality_select(&candidates, &acs[..1]).unwrap();
        let f_est = best.motion.focal().unwrap();
        assert!(
            (f_est - focal).abs() / focal < 1e-6,
            "focal relative error {}",
            (f_est - focal).abs() / focal
        );
        let (da, db) = best.motion.angle_errors(&motion);
        assert!(da < 1e-6 && db < 1e-6, "angle errors {da:.2e}/{db:.2e}");
    }

    #[test]
    fn focal_recovery_over_random_motions() {
        let mut rng = StdRng::seed_from_u64(404);
        for trial in 0..200 {
            let motion = PlanarMotion::new(
                rng.random_range(-0.4..0.4),
                rng.random_range(-PI..PI),
            );
            let focal = rng.random_range(300.0..1200.0);
            let acs = exact_pixel_correspondences(&motion, focal, 1, 30_000 + trial);
            let candidates = solve_1acf(&acs[0]).unwrap();
            let best = candidates
                .iter()
                .min_by(|a, b| {
                    let ea = a.motion.angle_errors(&motion);
                    let eb = b.motion.angle_errors(&motion);
                    (ea.0 + ea.1).partial_cmp(&(eb.0 + eb.1)).unwrap()
                })
                .unwrap();
            let f_est = best.motion.focal().unwrap();
            assert!(
                (f_est - focal).abs() / focal < 1e-5,
                "trial {trial}: focal {f_est} vs {focal}"
            );
        }
    }

    #[test]
    fn zero_motion_makes_the_squared_system_singular() {
        // alpha = beta = 0 zeroes both sine components of the null vector.
        let motion = PlanarMotion::new(0.0, 0.0);
        let acs = exact_pixel_correspondences(&motion, 600.0, 1, 7);
        assert!(matches!(
            solve_1acf(&acs[0]),
            Err(SolverError::SingularSystem { .. })
        ));
    }

    #[test]
    fn pure_translation_is_singular_regardless_of_direction() {
        // Without rotation the two ratio equations coincide and the focal
        // length is unobservable.
        let motion = PlanarMotion::new(0.0, 0.8);
        let acs = exact_pixel_correspondences(&motion, 600.0, 1, 8);
        assert!(matches!(
            solve_1acf(&acs[0]),
            Err(SolverError::SingularSystem { .. })
        ));
    }

    #[test]
    fn squared_cosine_above_one_is_clamped() {
        let cands = angle_candidates(1.0 + 1e-9);
        for c in cands {
            assert!(c == 0.0 || c.abs() == PI || c == -0.0, "got {c}");
        }
        let cands = angle_candidates(-1e-12);
        for c in cands {
            assert!(
                (c.abs() - PI / 2.0).abs() < 1e-12,
                "expected +-pi/2, got {c}"
            );
        }
    }

    #[test]
    fn rejects_when_no_permutation_has_positive_focals() {
        // A null vector with a vanishing first component forces f_a <= 0
        // for every permutation.
        let rows = [
            nalgebra::RowVector4::new(0.0, 1.0, 0.0, 0.0),
            nalgebra::RowVector4::new(0.0, 0.0, 1.0, 0.0),
            nalgebra::RowVector4::new(0.0, 0.0, 0.0, 1.0),
        ];
        let stacked = StackedConstraints::from_rows(&rows);
        let null = stacked.kernel().unwrap(); // n = [1, 0, 0, 0] => det = 0
        assert!(matches!(
            candidates_from_null(&null, &stacked),
            Err(SolverError::SingularSystem { .. })
        ));

        // Hand-built null vector with sign structure rejecting all
        // permutations: n1 = 0 makes every f_a either 0 or NaN.
        let rows = [
            nalgebra::RowVector4::new(1.0, 0.0, 0.0, 0.0),
            nalgebra::RowVector4::new(0.0, 1.0, 1.0, 0.0),
            nalgebra::RowVector4::new(0.0, 0.0, 1.0, 2.0),
        ];
        let stacked = StackedConstraints::from_rows(&rows);
        let null = stacked.kernel().unwrap();
        let [n1, ..] = null.components();
        assert!(n1.abs() < 1e-12);
        assert!(matches!(
            candidates_from_null(&null, &stacked),
            Err(SolverError::NoValidFocal)
        ));
    }

    #[test]
    fn candidates_are_sorted_by_focal_gap_and_distinct() {
        let motion = PlanarMotion::new(0.25, -0.6);
        let acs = exact_pixel_correspondences(&motion, 800.0, 1, 11);
        let candidates = solve_1acf(&acs[0]).unwrap();
        let gaps: Vec<f64> = candidates.iter().map(|c| c.focal_gap.unwrap()).collect();
        for w in gaps.windows(2) {
            assert!(w[0] <= w[1]);
        }
        let all = candidates.as_slice();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                let (da, db) = a.motion.angle_errors(&b.motion);
                assert!(da > 1e-9 || db > 1e-9, "duplicate candidates in the set");
            }
        }
    }
}
