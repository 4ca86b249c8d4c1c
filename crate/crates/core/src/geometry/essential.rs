//! Planar essential and fundamental matrices.
//!
//! For a camera pair undergoing planar motion (yaw `alpha`, translation
//! direction `beta`, unit baseline) the essential matrix `E = [t]x R` has
//! zeros everywhere except the four entries
//!
//! ```text
//! e2 = -sin(beta)          e4 = sin(alpha + beta)
//! e6 = -cos(alpha + beta)  e8 = cos(beta)
//! ```
//!
//! in row-major order, giving `E` a Frobenius norm of exactly `sqrt(2)`.

use nalgebra::Matrix3;

use super::angles::wrap_angle;
use super::types::{NormalizedPoint, PlanarMotion};
use super::GeometryError;

/// Relative tolerance of the zero-pattern check in [`EssentialMatrix::decompose_planar`].
pub const PLANAR_PATTERN_TOLERANCE: f64 = 1e-9;

/// Essential matrix with the planar-motion zero pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssentialMatrix {
    m: Matrix3<f64>,
}

impl EssentialMatrix {
    /// Builds the essential matrix `[t]x R` of a planar motion.
    ///
    /// Off-pattern entries are exactly zero and the Frobenius norm is
    /// `sqrt(2)` (unit-norm translation).
    pub fn from_motion(motion: &PlanarMotion) -> Self {
        let (sin_b, cos_b) = motion.beta().sin_cos();
        let (sin_ab, cos_ab) = (motion.alpha() + motion.beta()).sin_cos();
        Self {
            m: Matrix3::new(0.0, -sin_b, 0.0, sin_ab, 0.0, -cos_ab, 0.0, cos_b, 0.0),
        }
    }

    /// Wraps a raw matrix, rescaling it to Frobenius norm `sqrt(2)`.
    ///
    /// The planar zero pattern is not enforced here; it is checked by
    /// [`Self::decompose_planar`].
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        let norm = m.norm();
        let scale = if norm > 0.0 {
            std::f64::consts::SQRT_2 / norm
        } else {
            1.0
        };
        Self { m: m * scale }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Largest off-pattern entry magnitude relative to the matrix norm.
    pub fn zero_pattern_defect(&self) -> f64 {
        let m = &self.m;
        let worst = [m[(0, 0)], m[(0, 2)], m[(1, 1)], m[(2, 0)], m[(2, 2)]]
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        let norm = m.norm();
        if norm > 0.0 {
            worst / norm
        } else {
            worst
        }
    }

    /// Recovers the two planar motions compatible with this matrix.
    ///
    /// `E` and `-E` encode the same epipolar geometry, so the result is the
    /// pair `(alpha, beta)` and `(alpha, beta + pi)`; cheirality
    /// disambiguates them downstream.
    pub fn decompose_planar(&self) -> Result<[PlanarMotion; 2], GeometryError> {
        let defect = self.zero_pattern_defect();
        if defect > PLANAR_PATTERN_TOLERANCE {
            return Err(GeometryError::NonPlanarPattern {
                found: defect,
                tolerance: PLANAR_PATTERN_TOLERANCE,
            });
        }
        let e2 = self.m[(0, 1)];
        let e4 = self.m[(1, 0)];
        let e6 = self.m[(1, 2)];
        let e8 = self.m[(2, 1)];
        let beta = (-e2).atan2(e8);
        let alpha_plus_beta = e4.atan2(-e6);
        let motion = PlanarMotion::new(wrap_angle(alpha_plus_beta - beta), beta);
        Ok([motion, motion.flipped_translation()])
    }

    /// Epipolar residual `q2^T E q1` for a normalized point pair.
    pub fn epipolar_residual(&self, q1: &NormalizedPoint, q2: &NormalizedPoint) -> f64 {
        (q2.homogeneous().transpose() * self.m * q1.homogeneous())[(0, 0)]
    }
}

/// Fundamental matrix of a planar motion under the semi-calibrated model
/// `C1 = C2 = diag(f, f, 1)`: `F = C^{-T} E C^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalMatrix {
    m: Matrix3<f64>,
}

impl FundamentalMatrix {
    /// Builds `F` from a planar motion and a common focal length.
    pub fn from_motion(motion: &PlanarMotion, focal: f64) -> Result<Self, GeometryError> {
        if !(focal.is_finite() && focal > 0.0) {
            return Err(GeometryError::InvalidFocal(focal));
        }
        let (sin_b, cos_b) = motion.beta().sin_cos();
        let (sin_ab, cos_ab) = (motion.alpha() + motion.beta()).sin_cos();
        let f2 = focal * focal;
        Ok(Self {
            m: Matrix3::new(
                0.0,
                -sin_b / f2,
                0.0,
                sin_ab / f2,
                0.0,
                -cos_ab / focal,
                0.0,
                cos_b / focal,
                0.0,
            ),
        })
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Epipolar residual `p2^T F p1` for a pixel-frame point pair.
    pub fn epipolar_residual(&self, p1: &NormalizedPoint, p2: &NormalizedPoint) -> f64 {
        (p2.homogeneous().transpose() * self.m * p1.homogeneous())[(0, 0)]
    }
}
