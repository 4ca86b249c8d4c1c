//! Homography estimation (normalized DLT) and the analytic plane-induced
//! homography used for ground truth.

use nalgebra::{DMatrix, Matrix3, Vector3};

use super::SynthError;

/// Analytic homography induced by the plane `n . X = d` between a camera at
/// the origin and one with pose `(r, t)` (`x2 = r X + t`), in normalized
/// coordinates: `H = R + t n^T / d`.
pub fn planar_homography(
    r: &Matrix3<f64>,
    t: &Vector3<f64>,
    normal: &Vector3<f64>,
    d: f64,
) -> Matrix3<f64> {
    r + t * normal.transpose() / d
}

/// Normalized direct linear transform from at least four point pairs.
///
/// Both point sets are conditioned with a similarity (centroid to the
/// origin, mean distance sqrt(2)) before the SVD solve.
pub fn fit_homography_dlt(
    pts1: &[[f64; 2]],
    pts2: &[[f64; 2]],
) -> Result<Matrix3<f64>, SynthError> {
    let n = pts1.len();
    if n < 4 || pts2.len() != n {
        return Err(SynthError::InvalidConfig(format!(
            "homography estimation needs at least 4 point pairs, got {n}"
        )));
    }
    let t1 = conditioning_transform(pts1);
    let t2 = conditioning_transform(pts2);

    let rows = (2 * n).max(9);
    let mut a = DMatrix::<f64>::zeros(rows, 9);
    for (i, (p, q)) in pts1.iter().zip(pts2).enumerate() {
        let x = apply_similarity(&t1, p);
        let u = apply_similarity(&t2, q);
        let r0 = 2 * i;
        a[(r0, 0)] = -x[0];
        a[(r0, 1)] = -x[1];
        a[(r0, 2)] = -1.0;
        a[(r0, 6)] = u[0] * x[0];
        a[(r0, 7)] = u[0] * x[1];
        a[(r0, 8)] = u[0];
        let r1 = r0 + 1;
        a[(r1, 3)] = -x[0];
        a[(r1, 4)] = -x[1];
        a[(r1, 5)] = -1.0;
        a[(r1, 6)] = u[1] * x[0];
        a[(r1, 7)] = u[1] * x[1];
        a[(r1, 8)] = u[1];
    }

    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let h_vec = v_t.row(v_t.nrows() - 1);
    let h_cond = Matrix3::new(
        h_vec[0], h_vec[1], h_vec[2], h_vec[3], h_vec[4], h_vec[5], h_vec[6], h_vec[7], h_vec[8],
    );

    let t2_inv = t2.try_inverse().expect("similarity is invertible");
    let mut h = t2_inv * h_cond * t1;
    // Fix scale and sign for reproducibility.
    let norm = h.norm();
    if norm < 1e-300 {
        return Err(SynthError::InvalidConfig(
            "degenerate homography solve".into(),
        ));
    }
    h /= norm;
    if h[(2, 2)] < 0.0 {
        h = -h;
    }
    Ok(h)
}

fn conditioning_transform(pts: &[[f64; 2]]) -> Matrix3<f64> {
    let n = pts.len() as f64;
    let (mut cx, mut cy) = (0.0, 0.0);
    for p in pts {
        cx += p[0];
        cy += p[1];
    }
    cx /= n;
    cy /= n;
    let mut mean_dist = 0.0;
    for p in pts {
        mean_dist += ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt();
    }
    mean_dist /= n;
    let s = if mean_dist > 1e-12 {
        2.0f64.sqrt() / mean_dist
    } else {
        1.0
    };
    Matrix3::new(s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0)
}

fn apply_similarity(t: &Matrix3<f64>, p: &[f64; 2]) -> [f64; 2] {
    [
        t[(0, 0)] * p[0] + t[(0, 2)],
        t[(1, 1)] * p[1] + t[(1, 2)],
    ]
}

/// Scale-invariant distance between homographies (unit-norm, sign-aligned).
pub fn homography_distance(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let an = a / a.norm();
    let bn = b / b.norm();
    (an - bn).norm().min((an + bn).norm())
}
