//! First-order epipolar residual used for inlier classification.

use crate::geometry::{AffineCorrespondence, EssentialMatrix, PlanarMotion};

use super::RobustError;

/// Denominator threshold below which the Sampson residual is undefined.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-14;

/// Sampson distance of a normalized point pair with respect to the
/// essential matrix of `motion`, scaled by `focal` to express the result
/// in pixels.
pub fn sampson_error_px(
    motion: &PlanarMotion,
    ac: &AffineCorrespondence,
    focal: f64,
) -> Result<f64, RobustError> {
    if !(focal.is_finite() && focal > 0.0) {
        return Err(RobustError::InvalidFocal(focal));
    }
    let e = EssentialMatrix::from_motion(motion);
    let m = e.matrix();
    let q1 = ac.p1.homogeneous();
    let q2 = ac.p2.homogeneous();
    let eq1 = m * q1;
    let etq2 = m.transpose() * q2;
    let denom_sq = eq1.x * eq1.x + eq1.y * eq1.y + etq2.x * etq2.x + etq2.y * etq2.y;
    let denom = denom_sq.sqrt();
    if denom < DEGENERATE_DENOMINATOR {
        return Err(RobustError::DegenerateResidual);
    }
    let numer = q2.dot(&eq1).abs();
    Ok(numer / denom * focal)
}

/// Residual of a candidate against one correspondence, in pixels.
///
/// Semi-calibrated candidates carry their own focal estimate: the
/// correspondence (pixel-centered) is normalized by it before the Sampson
/// evaluation. Calibrated candidates expect normalized correspondences and
/// use `fallback_focal` for the pixel scaling.
pub fn candidate_residual_px(
    motion: &PlanarMotion,
    ac: &AffineCorrespondence,
    fallback_focal: f64,
) -> Result<f64, RobustError> {
    match motion.focal() {
        Some(f) => {
            let scaled = AffineCorrespondence::new(
                crate::geometry::NormalizedPoint::new(ac.p1.x / f, ac.p1.y / f),
                crate::geometry::NormalizedPoint::new(ac.p2.x / f, ac.p2.y / f),
                ac.a,
            );
            sampson_error_px(motion, &scaled, f)
        }
        None => sampson_error_px(motion, ac, fallback_focal),
    }
}
