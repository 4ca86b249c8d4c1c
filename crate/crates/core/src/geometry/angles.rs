//! Angle canonicalization helpers.
//!
//! All motion angles in this crate live in `[-pi, pi)`; comparisons between
//! angles are made modulo `2*pi`.

use std::f64::consts::{PI, TAU};

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let wrapped = (angle + PI).rem_euclid(TAU) - PI;
    // rem_euclid can return TAU for tiny negative inputs.
    if wrapped >= PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

/// Signed difference `a - b` wrapped into `[-pi, pi)`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// True when two angles coincide modulo `2*pi` within `tol` radians.
pub fn angles_equal(a: f64, b: f64, tol: f64) -> bool {
    angle_difference(a, b).abs() <= tol
}
