//! Point transfer through a homography and its first-order linearization.

use nalgebra::Matrix3;

use super::types::NormalizedPoint;
use super::GeometryError;

/// Denominators below this magnitude are treated as mapping to infinity.
pub const INFINITY_TOLERANCE: f64 = 1e-12;

/// Projects `p` through the homography `h`.
pub fn apply_homography(
    h: &Matrix3<f64>,
    p: &NormalizedPoint,
) -> Result<NormalizedPoint, GeometryError> {
    let w = h[(2, 0)] * p.x + h[(2, 1)] * p.y + h[(2, 2)];
    if w.abs() < INFINITY_TOLERANCE {
        return Err(GeometryError::AtInfinity(w));
    }
    Ok(NormalizedPoint::new(
        (h[(0, 0)] * p.x + h[(0, 1)] * p.y + h[(0, 2)]) / w,
        (h[(1, 0)] * p.x + h[(1, 1)] * p.y + h[(1, 2)]) / w,
    ))
}

/// Transfers `p1` through `h` and returns the transferred point together
/// with the 2x2 Jacobian of the projective map at `p1`.
///
/// The Jacobian is the local affine transformation of an affine
/// correspondence whose neighborhood lies on the plane inducing `h`:
/// `A = (H_2x2 - p2 * [h31 h32]) / w`.
pub fn affine_from_homography(
    h: &Matrix3<f64>,
    p1: &NormalizedPoint,
) -> Result<(NormalizedPoint, [f64; 4]), GeometryError> {
    let w = h[(2, 0)] * p1.x + h[(2, 1)] * p1.y + h[(2, 2)];
    if w.abs() < INFINITY_TOLERANCE {
        return Err(GeometryError::AtInfinity(w));
    }
    let p2 = NormalizedPoint::new(
        (h[(0, 0)] * p1.x + h[(0, 1)] * p1.y + h[(0, 2)]) / w,
        (h[(1, 0)] * p1.x + h[(1, 1)] * p1.y + h[(1, 2)]) / w,
    );
    let a = [
        (h[(0, 0)] - p2.x * h[(2, 0)]) / w,
        (h[(0, 1)] - p2.x * h[(2, 1)]) / w,
        (h[(1, 0)] - p2.y * h[(2, 0)]) / w,
        (h[(1, 1)] - p2.y * h[(2, 1)]) / w,
    ];
    Ok((p2, a))
}

#[cfg(test)]
pub(crate) fn finite_difference_affinity(
    h: &Matrix3<f64>,
    p1: &NormalizedPoint,
    step: f64,
) -> [f64; 4] {
    let at = |x: f64, y: f64| apply_homography(h, &NormalizedPoint::new(x, y)).unwrap();
    let xp = at(p1.x + step, p1.y);
    let xm = at(p1.x - step, p1.y);
    let yp = at(p1.x, p1.y + step);
    let ym = at(p1.x, p1.y - step);
    [
        (xp.x - xm.x) / (2.0 * step),
        (yp.x - ym.x) / (2.0 * step),
        (xp.y - xm.y) / (2.0 * step),
        (yp.y - ym.y) / (2.0 * step),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{RngExt, SeedableRng};

    #[test]
    fn identity_homography_is_identity_affinity() {
        let p1 = NormalizedPoint::new(0.3, -0.2);
        let (p2, a) = affine_from_homography(&Matrix3::identity(), &p1).unwrap();
        assert_eq!(p2, p1);
        assert_eq!(a, [1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn uniform_scaling_homography() {
        let s = 2.5;
        let h = Matrix3::new(s, 0.0, 0.0, 0.0, s, 0.0, 0.0, 0.0, 1.0);
        let p1 = NormalizedPoint::new(-0.1, 0.4);
        let (p2, a) = affine_from_homography(&h, &p1).unwrap();
        assert!((p2.x - s * p1.x).abs() < 1e-15);
        assert!((p2.y - s * p1.y).abs() < 1e-15);
        assert!((a[0] - s).abs() < 1e-15);
        assert!((a[3] - s).abs() < 1e-15);
        assert!(a[1].abs() < 1e-15 && a[2].abs() < 1e-15);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        // Oracle: central finite differences of the projective map.
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..1000 {
            let mut h = Matrix3::zeros();
            for r in 0..3 {
                for c in 0..3 {
                    h[(r, c)] = rng.random_range(-1.0..1.0);
                }
            }
            h[(2, 2)] += 3.0; // keep the point away from the line at infinity
            let p1 = NormalizedPoint::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let (_, a) = affine_from_homography(&h, &p1).unwrap();
            let fd = finite_difference_affinity(&h, &p1, 1e-6);
            for i in 0..4 {
                assert!(
                    (a[i] - fd[i]).abs() < 1e-5,
                    "entry {i}: analytic {} vs fd {}",
                    a[i],
                    fd[i]
                );
            }
        }
    }

    #[test]
    fn point_at_infinity_is_rejected() {
        let h = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        let p1 = NormalizedPoint::new(0.0, 0.5);
        assert!(matches!(
            affine_from_homography(&h, &p1),
            Err(GeometryError::AtInfinity(_))
        ));
    }
}
