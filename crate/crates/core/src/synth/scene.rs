//! Synthetic scene generation: a random plane seen by two cameras under
//! (optionally corrupted) planar motion, Gaussian pixel noise, and local
//! affinities derived from the homography fitted to the noisy matches.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use rand::rngs::StdRng;
use rand::{Rng, RngExt, SeedableRng};
use rand_distr::{Distribution, Normal, UnitSphere};

use crate::geometry::{
    affine_from_homography, AffineCorrespondence, CameraIntrinsics, NormalizedPoint, PlanarMotion,
};

use super::homography_fit::{fit_homography_dlt, planar_homography};
use super::SynthError;

/// Parameters of the synthetic protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    /// Common focal length of both cameras, pixels.
    pub focal: f64,
    /// Principal point, pixels.
    pub principal_point: (f64, f64),
    /// Points sampled on the scene plane.
    pub points: usize,
    /// Standard deviation of the Gaussian noise added to every image
    /// coordinate, pixels.
    pub noise_sigma_px: f64,
    /// Standard deviation of the random tilt applied to the second camera,
    /// degrees; 0 keeps the motion exactly planar.
    pub planarity_sigma_deg: f64,
    /// Sampling range of the yaw angle, radians.
    pub alpha_range: (f64, f64),
    /// Sampling range of the translation direction, radians.
    pub beta_range: (f64, f64),
    /// Trials per noise level in sweeps.
    pub trials: usize,
    /// Master RNG seed.
    pub seed: u64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            focal: 600.0,
            principal_point: (300.0, 300.0),
            points: 50,
            noise_sigma_px: 0.0,
            planarity_sigma_deg: 0.0,
            alpha_range: (-0.3, 0.3),
            beta_range: (-PI, PI),
            trials: 1000,
            seed: 0,
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.points < 4 {
            return Err(SynthError::InvalidConfig(format!(
                "homography estimation needs at least 4 points, got {}",
                self.points
            )));
        }
        if !(self.focal.is_finite() && self.focal > 0.0) {
            return Err(SynthError::InvalidConfig(format!(
                "focal length must be positive, got {}",
                self.focal
            )));
        }
        if self.noise_sigma_px < 0.0 || self.planarity_sigma_deg < 0.0 {
            return Err(SynthError::InvalidConfig(
                "noise levels must be non-negative".into(),
            ));
        }
        if self.trials == 0 {
            return Err(SynthError::InvalidConfig("trials must be positive".into()));
        }
        Ok(())
    }

    pub fn intrinsics(&self) -> CameraIntrinsics {
        CameraIntrinsics::new(
            self.focal,
            self.focal,
            self.principal_point.0,
            self.principal_point.1,
        )
        .expect("validated focal length")
    }
}

/// One generated scene: correspondences in every frame the solvers consume.
#[derive(Debug, Clone)]
pub struct SyntheticScene {
    /// Correspondences in normalized coordinates (calibrated solvers).
    pub normalized: Vec<AffineCorrespondence>,
    /// Correspondences in raw pixel coordinates.
    pub pixel: Vec<AffineCorrespondence>,
    pub intrinsics: CameraIntrinsics,
    /// Homography fitted to the noisy pixel matches (source of the
    /// affinities).
    pub fitted_homography_px: Matrix3<f64>,
    /// Analytic plane-induced homography, pixel frame.
    pub true_homography_px: Matrix3<f64>,
    /// Rotation actually used for projection (perturbed when the planarity
    /// corruption is active).
    pub rotation_used: Matrix3<f64>,
    pub translation_used: Vector3<f64>,
}

impl SyntheticScene {
    /// Correspondences in principal-point-centered pixel coordinates (the
    /// frame of the semi-calibrated solver).
    pub fn pixel_centered(&self) -> Vec<AffineCorrespondence> {
        let c = &self.intrinsics;
        self.pixel
            .iter()
            .map(|ac| AffineCorrespondence::new(c.center(ac.p1), c.center(ac.p2), ac.a))
            .collect()
    }

    /// Correspondences in the frame a solver consumes.
    pub fn for_solver(&self, solver: crate::solvers::SolverKind) -> Vec<AffineCorrespondence> {
        if solver.semi_calibrated() {
            self.pixel_centered()
        } else {
            self.normalized.clone()
        }
    }
}

/// Composes the planar rotation with a random tilt about a random
/// horizontal axis (angle ~ N(0, sigma_deg)); the translation is kept.
/// Returns the pose actually used for projection.
pub fn corrupt_planarity<R: Rng>(
    motion: &PlanarMotion,
    sigma_deg: f64,
    rng: &mut R,
) -> (Matrix3<f64>, Vector3<f64>) {
    let r = motion.rotation();
    let t = motion.translation();
    if sigma_deg <= 0.0 {
        return (r, t);
    }
    let phi = rng.random_range(0.0..2.0 * PI);
    let axis = Vector3::new(phi.cos(), 0.0, phi.sin());
    let angle = Normal::new(0.0, sigma_deg.to_radians())
        .expect("positive sigma")
        .sample(rng);
    let tilt = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
    (tilt.into_inner() * r, t)
}

/// Samples a motion uniformly from the configured angle ranges.
pub fn sample_motion<R: Rng>(config: &SceneConfig, rng: &mut R) -> PlanarMotion {
    let alpha = sample_range(rng, config.alpha_range);
    let beta = sample_range(rng, config.beta_range);
    PlanarMotion::new(alpha, beta)
}

fn sample_range<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Generates a scene with a fresh RNG seeded from `config.seed`.
pub fn generate_scene(
    config: &SceneConfig,
    motion: &PlanarMotion,
) -> Result<SyntheticScene, SynthError> {
    let mut rng = StdRng::seed_from_u64(config.seed);
    generate_scene_with_rng(config, motion, &mut rng)
}

/// Generates a scene:
///
/// 1. sample a plane visible to both cameras (normal rejected when the
///    plane is seen close to edge-on by either one) with points at depth
///    3-10 baseline units;
/// 2. project the points into both cameras and add Gaussian pixel noise to
///    all coordinates;
/// 3. fit a homography to the noisy matches (normalized DLT over all
///    points) and read each local affinity off its Jacobian at the noisy
///    first-image point.
pub fn generate_scene_with_rng<R: Rng>(
    config: &SceneConfig,
    motion: &PlanarMotion,
    rng: &mut R,
) -> Result<SyntheticScene, SynthError> {
    config.validate()?;
    let (r_used, t_used) = corrupt_planarity(motion, config.planarity_sigma_deg, rng);
    let intr = config.intrinsics();
    let (width, height) = (2.0 * intr.cx, 2.0 * intr.cy);
    let axis2 = r_used.transpose() * Vector3::new(0.0, 0.0, 1.0);

    'plane: for _attempt in 0..100 {
        let s: [f64; 3] = UnitSphere.sample(rng);
        let normal = Vector3::new(s[0], s[1], s[2]);
        // Reject planes seen close to edge-on by either camera; they leave
        // a sliver of visible points and an ill-conditioned homography.
        if normal.z.abs() < 0.2 || normal.dot(&axis2).abs() < 0.2 {
            continue;
        }
        let depth0 = rng.random_range(4.0..8.0);
        let d = normal.z * depth0;

        let mut pix1: Vec<[f64; 2]> = Vec::with_capacity(config.points);
        let mut pix2: Vec<[f64; 2]> = Vec::with_capacity(config.points);
        for _ in 0..config.points {
            let mut placed = false;
            for _try in 0..100 {
                let u = rng.random_range(0.0..width);
                let v = rng.random_range(0.0..height);
                let dir = Vector3::new((u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, 1.0);
                let denom = normal.dot(&dir);
                if denom.abs() < 1e-9 {
                    continue;
                }
                let z1 = d / denom;
                if !(3.0..=10.0).contains(&z1) {
                    continue;
                }
                let x = dir * z1;
                let x2 = r_used * x + t_used;
                if x2.z < 0.5 {
                    continue;
                }
                let p2 = [
                    intr.fx * x2.x / x2.z + intr.cx,
                    intr.fy * x2.y / x2.z + intr.cy,
                ];
                if p2[0] < 0.0 || p2[0] > width || p2[1] < 0.0 || p2[1] > height {
                    continue;
                }
                pix1.push([u, v]);
                pix2.push(p2);
                placed = true;
                break;
            }
            if !placed {
                continue 'plane;
            }
        }

        if config.noise_sigma_px > 0.0 {
            let noise = Normal::new(0.0, config.noise_sigma_px).expect("positive sigma");
            for p in pix1.iter_mut().chain(pix2.iter_mut()) {
                p[0] += noise.sample(rng);
                p[1] += noise.sample(rng);
            }
        }

        let fitted = fit_homography_dlt(&pix1, &pix2)?;

        let mut pixel = Vec::with_capacity(config.points);
        let mut normalized = Vec::with_capacity(config.points);
        for (p, q) in pix1.iter().zip(&pix2) {
            let p1 = NormalizedPoint::new(p[0], p[1]);
            let p2 = NormalizedPoint::new(q[0], q[1]);
            let Ok((_, a_px)) = affine_from_homography(&fitted, &p1) else {
                continue 'plane;
            };
            pixel.push(AffineCorrespondence::new(p1, p2, a_px));
            // fx = fy shared by both cameras: the affinity is unchanged by
            // normalization.
            normalized.push(AffineCorrespondence::new(
                intr.normalize(p1),
                intr.normalize(p2),
                a_px,
            ));
        }

        let c = intr.matrix();
        let c_inv = c.try_inverse().expect("intrinsics are invertible");
        let true_h_norm = planar_homography(&r_used, &t_used, &normal, d);
        return Ok(SyntheticScene {
            normalized,
            pixel,
            intrinsics: intr,
            fitted_homography_px: fitted,
            true_homography_px: c * true_h_norm * c_inv,
            rotation_used: r_used,
            translation_used: t_used,
        });
    }
    Err(SynthError::GeometryRejection)
}
