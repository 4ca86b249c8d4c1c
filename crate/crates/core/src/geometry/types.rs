//! Core domain types: image points, affine correspondences, planar motions
//! and camera intrinsics.

use nalgebra::{Matrix3, Vector3};

use super::angles::{angle_difference, wrap_angle};
use super::GeometryError;

/// Sanity bound for image coordinates (normalized or pixel frame).
pub const COORDINATE_BOUND: f64 = 1e6;

/// A 2D image point with implicit homogeneous third coordinate 1.
///
/// Depending on context the coordinates are normalized (intrinsics removed)
/// or pixel-frame; the representation is identical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPoint {
    pub x: f64,
    pub y: f64,
}

impl NormalizedPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Homogeneous representation `[x, y, 1]`.
    pub fn homogeneous(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, 1.0)
    }

    pub fn is_valid(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.x.abs() < COORDINATE_BOUND
            && self.y.abs() < COORDINATE_BOUND
    }
}

/// A point match plus the 2x2 local affine transformation mapping the
/// neighborhood of `p1` in the first image onto the neighborhood of `p2`
/// in the second one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCorrespondence {
    pub p1: NormalizedPoint,
    pub p2: NormalizedPoint,
    /// Affinity entries `a1, a2, a3, a4` in row-major order.
    pub a: [f64; 4],
}

impl AffineCorrespondence {
    pub const fn new(p1: NormalizedPoint, p2: NormalizedPoint, a: [f64; 4]) -> Self {
        Self { p1, p2, a }
    }

    /// Determinant of the local affinity.
    pub fn affinity_det(&self) -> f64 {
        self.a[0] * self.a[3] - self.a[1] * self.a[2]
    }

    /// Checks the type invariants: finite entries, bounded points and a
    /// non-degenerate affinity.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !self.p1.is_valid() {
            return Err(GeometryError::InvalidPoint {
                x: self.p1.x,
                y: self.p1.y,
            });
        }
        if !self.p2.is_valid() {
            return Err(GeometryError::InvalidPoint {
                x: self.p2.x,
                y: self.p2.y,
            });
        }
        if !self.a.iter().all(|v| v.is_finite()) {
            return Err(GeometryError::DegenerateAffinity(f64::NAN));
        }
        let det = self.affinity_det();
        let scale = self.a.iter().map(|v| v * v).sum::<f64>().max(1e-12);
        if det.abs() < 1e-12 * scale {
            return Err(GeometryError::DegenerateAffinity(det));
        }
        Ok(())
    }
}

/// Planar relative camera motion: rotation by `alpha` about the vertical
/// axis Y and translation along the unit direction
/// `[cos(beta), 0, sin(beta)]`. The translation scale is not recoverable
/// from image data, so the translation is kept on the unit circle.
///
/// For semi-calibrated estimates the common focal length rides along.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarMotion {
    alpha: f64,
    beta: f64,
    focal: Option<f64>,
}

impl PlanarMotion {
    /// Creates a motion, canonicalizing both angles into `[-pi, pi)`.
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha: wrap_angle(alpha),
            beta: wrap_angle(beta),
            focal: None,
        }
    }

    /// Creates a semi-calibrated motion carrying a focal length in pixels.
    pub fn with_focal(alpha: f64, beta: f64, focal: f64) -> Result<Self, GeometryError> {
        if !(focal.is_finite() && focal > 0.0) {
            return Err(GeometryError::InvalidFocal(focal));
        }
        Ok(Self {
            alpha: wrap_angle(alpha),
            beta: wrap_angle(beta),
            focal: Some(focal),
        })
    }

    /// Rotation angle about axis Y, in `[-pi, pi)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Translation direction angle, in `[-pi, pi)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Estimated common focal length in pixels, if this motion came from a
    /// semi-calibrated solver.
    pub fn focal(&self) -> Option<f64> {
        self.focal
    }

    /// Rotation matrix of the second camera: rotation by `alpha` about Y.
    pub fn rotation(&self) -> Matrix3<f64> {
        let (s, c) = self.alpha.sin_cos();
        Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
    }

    /// Unit translation `[cos(beta), 0, sin(beta)]`.
    pub fn translation(&self) -> Vector3<f64> {
        let (s, c) = self.beta.sin_cos();
        Vector3::new(c, 0.0, s)
    }

    /// The motion with the translation direction flipped (`beta + pi`).
    ///
    /// This is the other member of the sign-ambiguous pair sharing the same
    /// essential matrix up to sign; cheirality decides between the two.
    pub fn flipped_translation(&self) -> Self {
        Self {
            alpha: self.alpha,
            beta: wrap_angle(self.beta + std::f64::consts::PI),
            focal: self.focal,
        }
    }

    /// Absolute angle differences `(|d alpha|, |d beta|)` modulo `2*pi`.
    pub fn angle_errors(&self, other: &Self) -> (f64, f64) {
        (
            angle_difference(self.alpha, other.alpha).abs(),
            angle_difference(self.beta, other.beta).abs(),
        )
    }
}

/// Pinhole intrinsics with square-ish pixels and principal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64) -> Result<Self, GeometryError> {
        if !(fx.is_finite() && fx > 0.0) {
            return Err(GeometryError::InvalidFocal(fx));
        }
        if !(fy.is_finite() && fy > 0.0) {
            return Err(GeometryError::InvalidFocal(fy));
        }
        Ok(Self { fx, fy, cx, cy })
    }

    /// Calibration matrix `C`.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(self.fx, 0.0, self.cx, 0.0, self.fy, self.cy, 0.0, 0.0, 1.0)
    }

    /// Pixel point to normalized coordinates (`C^{-1} p`).
    pub fn normalize(&self, pixel: NormalizedPoint) -> NormalizedPoint {
        NormalizedPoint::new((pixel.x - self.cx) / self.fx, (pixel.y - self.cy) / self.fy)
    }

    /// Normalized point back to pixel coordinates.
    pub fn denormalize(&self, q: NormalizedPoint) -> NormalizedPoint {
        NormalizedPoint::new(q.x * self.fx + self.cx, q.y * self.fy + self.cy)
    }

    /// Pixel point with the principal point subtracted; focal scaling kept.
    pub fn center(&self, pixel: NormalizedPoint) -> NormalizedPoint {
        NormalizedPoint::new(pixel.x - self.cx, pixel.y - self.cy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn motion_canonicalizes_angles() {
        let m = PlanarMotion::new(3.0 * PI, -5.0 * PI / 2.0);
        assert!((m.alpha() - -PI).abs() < 1e-12);
        assert!((m.beta() - -PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn with_focal_rejects_nonpositive() {
        assert!(matches!(
            PlanarMotion::with_focal(0.0, 0.0, 0.0),
            Err(GeometryError::InvalidFocal(_))
        ));
        assert!(matches!(
            PlanarMotion::with_focal(0.0, 0.0, -600.0),
            Err(GeometryError::InvalidFocal(_))
        ));
        assert!(PlanarMotion::with_focal(0.1, 0.2, 600.0).is_ok());
    }

    #[test]
    fn rotation_is_orthonormal_about_y() {
        let m = PlanarMotion::new(0.7, 0.0);
        let r = m.rotation();
        let eye = r.transpose() * r;
        assert!((eye - Matrix3::identity()).abs().max() < 1e-14);
        assert!((r.determinant() - 1.0).abs() < 1e-14);
        // Y axis is fixed.
        let y = Vector3::new(0.0, 1.0, 0.0);
        assert!((r * y - y).norm() < 1e-15);
    }

    #[test]
    fn translation_is_unit_in_xz_plane() {
        for beta in [-3.0, -0.5, 0.0, 1.2, 3.1] {
            let t = PlanarMotion::new(0.0, beta).translation();
            assert!((t.norm() - 1.0).abs() < 1e-14);
            assert_eq!(t.y, 0.0);
        }
    }

    #[test]
    fn affinity_validation_rejects_singular() {
        let p = NormalizedPoint::new(0.1, 0.2);
        let ac = AffineCorrespondence::new(p, p, [1.0, 2.0, 0.5, 1.0]);
        assert!(matches!(
            ac.validate(),
            Err(GeometryError::DegenerateAffinity(_))
        ));
        let ac = AffineCorrespondence::new(p, p, [0.0; 4]);
        assert!(ac.validate().is_err());
        let ac = AffineCorrespondence::new(p, p, [1.0, 0.1, -0.2, 0.9]);
        assert!(ac.validate().is_ok());
    }

    #[test]
    fn intrinsics_roundtrip() {
        let c = CameraIntrinsics::new(600.0, 600.0, 300.0, 300.0).unwrap();
        let p = NormalizedPoint::new(431.5, 122.25);
        let q = c.normalize(p);
        let back = c.denormalize(q);
        assert!((back.x - p.x).abs() < 1e-12);
        assert!((back.y - p.y).abs() < 1e-12);
        assert!(CameraIntrinsics::new(0.0, 600.0, 0.0, 0.0).is_err());
    }
}
