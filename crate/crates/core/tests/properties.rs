//! Property tests of the algebraic invariants.

use std::f64::consts::PI;

use acpose::geometry::{
    wrap_angle, EssentialMatrix, FundamentalMatrix, NormalizedPoint, PlanarMotion,
};
use acpose::robust::{ransac_iterations, sampson_error_px};
use acpose::AffineCorrespondence;
use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;

fn cross_matrix(t: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -t.z, t.y, t.z, 0.0, -t.x, -t.y, t.x, 0.0)
}

proptest! {
    #[test]
    fn essential_equals_cross_product_times_rotation(
        alpha in -PI..PI,
        beta in -PI..PI,
    ) {
        let m = PlanarMotion::new(alpha, beta);
        let e = EssentialMatrix::from_motion(&m);
        let oracle = cross_matrix(&m.translation()) * m.rotation();
        prop_assert!((e.matrix() - oracle).abs().max() < 1e-12);
        prop_assert!((e.matrix().norm() - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn decomposition_recovers_the_motion(
        alpha in -PI..PI,
        beta in -PI..PI,
    ) {
        let m = PlanarMotion::new(alpha, beta);
        let candidates = EssentialMatrix::from_motion(&m).decompose_planar().unwrap();
        let recovered = candidates.iter().any(|c| {
            let (da, db) = c.angle_errors(&m);
            da < 1e-10 && db < 1e-10
        });
        prop_assert!(recovered);
    }

    #[test]
    fn unit_focal_fundamental_is_the_essential_matrix(
        alpha in -PI..PI,
        beta in -PI..PI,
    ) {
        let m = PlanarMotion::new(alpha, beta);
        let f = FundamentalMatrix::from_motion(&m, 1.0).unwrap();
        let e = EssentialMatrix::from_motion(&m);
        prop_assert_eq!(f.matrix(), e.matrix());
    }

    #[test]
    fn wrapped_angles_stay_canonical(angle in -100.0f64..100.0) {
        let w = wrap_angle(angle);
        prop_assert!((-PI..PI).contains(&w));
        prop_assert!((wrap_angle(w) - w).abs() < 1e-15);
        // Wrapping preserves the angle modulo 2*pi.
        prop_assert!(((angle - w) / (2.0 * PI)).rem_euclid(1.0) < 1e-9
            || ((angle - w) / (2.0 * PI)).rem_euclid(1.0) > 1.0 - 1e-9);
    }

    #[test]
    fn sampson_vanishes_exactly_on_the_epipolar_line(
        alpha in -PI..PI,
        beta in -PI..PI,
        x1 in -0.5f64..0.5,
        y1 in 0.05f64..0.5,
        x2 in -0.5f64..0.5,
    ) {
        let m = PlanarMotion::new(alpha, beta);
        let e = EssentialMatrix::from_motion(&m);
        let q1 = NormalizedPoint::new(x1, y1);
        let line = e.matrix() * q1.homogeneous();
        prop_assume!(line.y.abs() > 1e-3);
        // Solve the line equation for y2 so the pair is exactly epipolar.
        let y2 = -(line.x * x2 + line.z) / line.y;
        prop_assume!(y2.abs() < 1e3);
        let on = AffineCorrespondence::new(q1, NormalizedPoint::new(x2, y2), [1.0, 0.0, 0.0, 1.0]);
        if let Ok(err) = sampson_error_px(&m, &on, 600.0) {
            prop_assert!(err < 1e-9, "on-line pair measured {err}");
        }
        // A pair off the line measures strictly positive.
        let off = AffineCorrespondence::new(
            q1,
            NormalizedPoint::new(x2, y2 + 0.05),
            [1.0, 0.0, 0.0, 1.0],
        );
        if let Ok(err) = sampson_error_px(&m, &off, 600.0) {
            prop_assert!(err > 0.0);
        }
    }

    #[test]
    fn iteration_bound_is_monotone(
        m in 1usize..6,
        lo in 0.05f64..0.95,
        hi_delta in 0.01f64..0.5,
    ) {
        let hi = (lo + hi_delta).min(1.0);
        prop_assert!(ransac_iterations(m, lo, 0.99) >= ransac_iterations(m, hi, 0.99));
        prop_assert!(ransac_iterations(m + 1, lo, 0.99) >= ransac_iterations(m, lo, 0.99));
    }
}
