//! Calibrated minimal solvers: 1AC (one affine correspondence), the linear
//! 3PC baseline (three point pairs) and the 2PC baseline (two point pairs).

use nalgebra::{RowVector4, Vector4};

use crate::geometry::{AffineCorrespondence, PlanarMotion};

use super::candidate::{push_distinct, CandidateSet, MotionCandidate};
use super::constraint::{epipolar_row, ConstraintMatrix, NullVector, StackedConstraints};
use super::SolverError;

const DUPLICATE_ANGLE_TOLERANCE: f64 = 1e-9;

/// Estimates the planar motion from a single affine correspondence.
///
/// The three constraint rows of the correspondence have a one-dimensional
/// null space holding the four trigonometric unknowns up to scale; the two
/// angles follow from `atan2` on the null vector. Returns the hypothesis
/// pair `(alpha, beta)` / `(alpha, beta + pi)` whose global sign only
/// cheirality can resolve.
pub fn solve_1ac(ac: &AffineCorrespondence) -> Result<CandidateSet, SolverError> {
    ac.validate().map_err(SolverError::InvalidCorrespondence)?;
    let b = ConstraintMatrix::from_correspondence(ac);
    let stacked = StackedConstraints::from_constraint_matrix(&b);
    let null = stacked.kernel()?;
    Ok(candidates_from_null(&null, &stacked))
}

/// Linear three-point solver: stacks the epipolar rows of three point
/// pairs and recovers the angles exactly as [`solve_1ac`] does.
pub fn solve_3pc(correspondences: &[AffineCorrespondence]) -> Result<CandidateSet, SolverError> {
    if correspondences.len() < 3 {
        return Err(SolverError::InsufficientInput {
            needed: 3,
            got: correspondences.len(),
        });
    }
    let rows: Vec<RowVector4<f64>> = correspondences[..3].iter().map(epipolar_row).collect();
    let stacked = StackedConstraints::from_rows(&rows);
    let null = stacked.kernel()?;
    Ok(candidates_from_null(&null, &stacked))
}

/// Angle recovery shared by the rank-3 solvers: `atan2` on the null vector
/// seeds a short Gauss-Newton polish of `|| B x ||` over the two angles.
pub(crate) fn candidates_from_null(null: &NullVector, stacked: &StackedConstraints) -> CandidateSet {
    let [n1, n2, n3, n4] = null.components();
    let (sum, beta) = stacked.refine_angles(n2.atan2(n1), n4.atan2(n3));
    let motion = PlanarMotion::new(sum - beta, beta);
    let twin = motion.flipped_translation();
    // The residual re-imposes unit norms on both trigonometric pairs; it is
    // identical for the sign twin since x(alpha, beta + pi) = -x(alpha, beta).
    let residual = stacked.residual(motion.alpha(), motion.beta());
    CandidateSet::from_candidates(vec![
        MotionCandidate::calibrated(motion, residual),
        MotionCandidate::calibrated(twin, residual),
    ])
}

/// Two-point solver for planar motion.
///
/// Two epipolar rows leave a two-dimensional null space spanned by the
/// orthonormal pair `(u, v)`. A physical solution `x = u + lambda v` must
/// have equal norms on its two trigonometric halves, which is one quadratic
/// in `lambda`; each real root (plus the `lambda -> inf` limit `x = v` when
/// it satisfies the constraint) gives a hypothesis and its sign twin, so at
/// most four candidates are returned.
pub fn solve_2pc(correspondences: &[AffineCorrespondence]) -> Result<CandidateSet, SolverError> {
    if correspondences.len() < 2 {
        return Err(SolverError::InsufficientInput {
            needed: 2,
            got: correspondences.len(),
        });
    }
    let rows: Vec<RowVector4<f64>> = correspondences[..2].iter().map(epipolar_row).collect();
    let stacked = StackedConstraints::from_rows(&rows);
    let (u, v) = stacked.kernel_pair()?;

    // g(x, y) = x1 y1 + x2 y2 - x3 y3 - x4 y4; the norm-balance constraint
    // is g(x, x) = 0.
    let g = |a: &Vector4<f64>, b: &Vector4<f64>| a.x * b.x + a.y * b.y - a.z * b.z - a.w * b.w;
    let qa = g(&v, &v);
    let qb = g(&u, &v);
    let qc = g(&u, &u);

    let mut roots: Vec<f64> = Vec::with_capacity(2);
    if qa.abs() < 1e-14 {
        // Degenerated to a linear equation in lambda.
        if qb.abs() > 1e-14 {
            roots.push(-qc / (2.0 * qb));
        }
    } else {
        let disc = qb * qb - qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Citardauq pairing for numerical stability.
            let q = -(qb + qb.signum() * sq);
            if q.abs() > 0.0 {
                roots.push(q / qa);
                roots.push(qc / q);
            } else {
                // qb == 0 and disc == -qa*qc >= 0.
                roots.push(sq / qa);
                roots.push(-sq / qa);
            }
        }
    }

    let mut xs: Vec<Vector4<f64>> = roots.iter().map(|&l| u + l * v).collect();
    if qa.abs() < 1e-12 {
        // The lambda -> infinity limit satisfies the constraint as well.
        xs.push(v);
    }

    let mut candidates: Vec<MotionCandidate> = Vec::with_capacity(4);
    for x in xs {
        let mu = (x.z * x.z + x.w * x.w).sqrt();
        if mu < 1e-10 {
            continue;
        }
        let x = x / mu;
        let beta = x.w.atan2(x.z);
        let alpha_plus_beta = x.y.atan2(x.x);
        let motion = PlanarMotion::new(alpha_plus_beta - beta, beta);
        let residual = stacked.residual(motion.alpha(), motion.beta());
        push_distinct(
            &mut candidates,
            MotionCandidate::calibrated(motion, residual),
            DUPLICATE_ANGLE_TOLERANCE,
        );
        push_distinct(
            &mut candidates,
            MotionCandidate::calibrated(motion.flipped_translation(), residual),
            DUPLICATE_ANGLE_TOLERANCE,
        );
    }
    if candidates.is_empty() {
        return Err(SolverError::NoRealSolution);
    }
    Ok(CandidateSet::from_candidates(candidates))
}
