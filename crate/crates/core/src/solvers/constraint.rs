//! Linear constraints tying an affine correspondence to planar motion.
//!
//! Every solver in this module reduces to the homogeneous system
//! `B x = 0` with the unknown vector
//!
//! ```text
//! x = [cos(alpha + beta), sin(alpha + beta), cos(beta), sin(beta)]^T
//! ```
//!
//! (up to scale). A point pair contributes one epipolar row; the local
//! affinity contributes two more, so a single affine correspondence already
//! pins down the one-dimensional null space.

use nalgebra::{Matrix3x4, Matrix4, RowVector4, Vector4};

use crate::geometry::AffineCorrespondence;

use super::SolverError;

/// Relative singular-value threshold of the rank tests.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Trigonometric unknown vector of a motion hypothesis.
pub fn trig_vector(alpha: f64, beta: f64) -> Vector4<f64> {
    let (sin_ab, cos_ab) = (alpha + beta).sin_cos();
    let (sin_b, cos_b) = beta.sin_cos();
    Vector4::new(cos_ab, sin_ab, cos_b, sin_b)
}

/// Epipolar constraint row of a point pair (`q2^T E q1 = 0` rearranged
/// onto the trigonometric unknowns).
pub fn epipolar_row(ac: &AffineCorrespondence) -> RowVector4<f64> {
    let (q1, q2) = (ac.p1, ac.p2);
    RowVector4::new(-q2.y, q1.x * q2.y, q1.y, -q2.x * q1.y)
}

/// The two constraint rows contributed by the local affinity.
pub fn affinity_rows(ac: &AffineCorrespondence) -> [RowVector4<f64>; 2] {
    let (q1, q2) = (ac.p1, ac.p2);
    let [a1, a2, a3, a4] = ac.a;
    [
        RowVector4::new(-a3, q2.y + a3 * q1.x, 0.0, -a1 * q1.y),
        RowVector4::new(-a4, a4 * q1.x, 1.0, -q2.x - a2 * q1.y),
    ]
}

/// The 3x4 coefficient matrix of a single affine correspondence: one
/// epipolar row plus the two affinity rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintMatrix {
    m: Matrix3x4<f64>,
}

impl ConstraintMatrix {
    pub fn from_correspondence(ac: &AffineCorrespondence) -> Self {
        let [r2, r3] = affinity_rows(ac);
        let mut m = Matrix3x4::zeros();
        m.set_row(0, &epipolar_row(ac));
        m.set_row(1, &r2);
        m.set_row(2, &r3);
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix3x4<f64> {
        &self.m
    }

    /// Residual norm `|| B x(alpha, beta) ||` of a motion hypothesis.
    pub fn residual(&self, alpha: f64, beta: f64) -> f64 {
        (self.m * trig_vector(alpha, beta)).norm()
    }
}

/// Unit-norm null vector of a stacked constraint system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullVector {
    n: Vector4<f64>,
}

impl NullVector {
    pub fn components(&self) -> [f64; 4] {
        [self.n.x, self.n.y, self.n.z, self.n.w]
    }

    pub fn vector(&self) -> &Vector4<f64> {
        &self.n
    }
}

/// Up to four constraint rows, zero-padded into a square matrix so that the
/// full set of right singular vectors is available.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StackedConstraints {
    m: Matrix4<f64>,
    rows: usize,
}

impl StackedConstraints {
    pub fn from_rows(rows: &[RowVector4<f64>]) -> Self {
        assert!(rows.len() <= 4, "at most four constraint rows");
        let mut m = Matrix4::zeros();
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        Self { m, rows: rows.len() }
    }

    pub fn from_constraint_matrix(b: &ConstraintMatrix) -> Self {
        let rows = [
            b.matrix().row(0).into_owned(),
            b.matrix().row(1).into_owned(),
            b.matrix().row(2).into_owned(),
        ];
        Self::from_rows(&rows)
    }

    /// Equilibrates every nonzero row to unit norm. The null space is
    /// untouched, but the relative rank test stays meaningful when
    /// pixel-frame rows mix entries of order `f^2` with entries of order
    /// one.
    pub fn equilibrated(mut self) -> Self {
        for i in 0..self.rows {
            let norm = self.m.row(i).norm();
            if norm > 0.0 {
                let scaled = self.m.row(i) / norm;
                self.m.set_row(i, &scaled);
            }
        }
        self
    }

    pub fn residual(&self, alpha: f64, beta: f64) -> f64 {
        (self.m * trig_vector(alpha, beta)).norm()
    }

    pub fn residual_of(&self, x: &Vector4<f64>) -> f64 {
        (self.m * x).norm()
    }

    /// Gauss-Newton refinement of `(alpha + beta, beta)` minimizing
    /// `|| B x(angles) ||` from a seed near the basin. With noise the two
    /// halves of the null vector cannot both have unit norm, so the plain
    /// `atan2` read-off is not the minimizer of the stacked residual; a few
    /// damped steps close that gap. Exact inputs are a fixed point.
    pub fn refine_angles(&self, mut sum: f64, mut beta: f64) -> (f64, f64) {
        let residual = |s: f64, b: f64| {
            let (ss, cs) = s.sin_cos();
            let (sb, cb) = b.sin_cos();
            (self.m * Vector4::new(cs, ss, cb, sb)).norm_squared()
        };
        let mut current = residual(sum, beta);
        for _ in 0..25 {
            let (ss, cs) = sum.sin_cos();
            let (sb, cb) = beta.sin_cos();
            let x = Vector4::new(cs, ss, cb, sb);
            let r = self.m * x;
            let j_sum = self.m * Vector4::new(-ss, cs, 0.0, 0.0);
            let j_beta = self.m * Vector4::new(0.0, 0.0, -sb, cb);
            let a11 = j_sum.dot(&j_sum);
            let a12 = j_sum.dot(&j_beta);
            let a22 = j_beta.dot(&j_beta);
            let g1 = j_sum.dot(&r);
            let g2 = j_beta.dot(&r);
            let det = a11 * a22 - a12 * a12;
            if det.abs() < 1e-18 {
                break;
            }
            let mut step_sum = -(a22 * g1 - a12 * g2) / det;
            let mut step_beta = -(a11 * g2 - a12 * g1) / det;
            // Backtrack until the residual does not increase.
            let mut improved = false;
            for _ in 0..8 {
                let next = residual(sum + step_sum, beta + step_beta);
                if next <= current {
                    sum += step_sum;
                    beta += step_beta;
                    current = next;
                    improved = true;
                    break;
                }
                step_sum *= 0.5;
                step_beta *= 0.5;
            }
            if !improved || step_sum.abs().max(step_beta.abs()) < 1e-14 {
                break;
            }
        }
        (sum, beta)
    }

    /// Null vector for systems expected to have a one-dimensional kernel.
    ///
    /// Fails with `DegenerateInput` when the row space has rank below
    /// `self.rows` (relative singular-value test).
    pub fn kernel(&self) -> Result<NullVector, SolverError> {
        let svd = self.m.svd(false, true);
        let sv = svd.singular_values;
        let v_t = svd.v_t.expect("requested V^T");
        if sv[0] <= 0.0 || sv[self.rows - 1] / sv[0] < RANK_TOLERANCE {
            return Err(SolverError::DegenerateInput {
                rank: count_rank(&sv.as_slice()[..self.rows]),
                needed: self.rows,
            });
        }
        let n: Vector4<f64> = v_t.row(3).transpose();
        Ok(NullVector {
            n: n / n.norm(),
        })
    }

    /// Orthonormal basis of a two-dimensional kernel (two stacked rows).
    pub fn kernel_pair(&self) -> Result<(Vector4<f64>, Vector4<f64>), SolverError> {
        debug_assert_eq!(self.rows, 2);
        let svd = self.m.svd(false, true);
        let sv = svd.singular_values;
        let v_t = svd.v_t.expect("requested V^T");
        if sv[0] <= 0.0 || sv[self.rows - 1] / sv[0] < RANK_TOLERANCE {
            return Err(SolverError::DegenerateInput {
                rank: count_rank(&sv.as_slice()[..self.rows]),
                needed: self.rows,
            });
        }
        Ok((v_t.row(2).transpose(), v_t.row(3).transpose()))
    }
}

fn count_rank(sv: &[f64]) -> usize {
    if sv.is_empty() || sv[0] <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s / sv[0] >= RANK_TOLERANCE).count()
}
