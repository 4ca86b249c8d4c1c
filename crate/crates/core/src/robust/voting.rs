//! Weighted histogram voting over per-correspondence motion hypotheses.
//!
//! Every correspondence is solved once (the cost is linear in the point
//! count and independent of the outlier ratio); each cheirality-consistent
//! candidate deposits a residual-damped weight into a 2D angle histogram,
//! smoothed over the 3x3 bin neighborhood with a discrete Gaussian. The
//! winning motion is the weighted circular mean of the mass around the
//! peak bin. Semi-calibrated runs vote the focal length into a parallel
//! 1D histogram over log10(f).

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::geometry::{AffineCorrespondence, PlanarMotion};
use crate::solvers::{positive_depth_count, SolverKind};

use super::RobustError;

/// Parameters of [`histogram_vote`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoteConfig {
    /// Angular bin width in radians (both axes). Default: 0.5 degrees.
    pub bin_width_rad: f64,
    /// Residual scale tau of the vote weight `w = 1 / (1 + r / tau)`.
    pub residual_scale: f64,
    /// Number of bins of the log10-focal histogram.
    pub focal_bins: usize,
    /// Range of the log10-focal histogram, in log10(pixels).
    pub focal_log10_range: (f64, f64),
}

impl Default for VoteConfig {
    fn default() -> Self {
        Self {
            bin_width_rad: 0.5f64.to_radians(),
            residual_scale: 1e-3,
            focal_bins: 200,
            focal_log10_range: (2.0, 5000.0f64.log10()),
        }
    }
}

// 3x3 Gaussian kernel with sigma = 1 bin, normalized to unit sum so vote
// mass is conserved.
fn kernel3() -> [f64; 3] {
    let edge = (-0.5f64).exp();
    [edge, 1.0, edge]
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct AngleCell {
    weight: f64,
    // Circular accumulators for the weighted mean around the peak.
    cos_alpha: f64,
    sin_alpha: f64,
    cos_beta: f64,
    sin_beta: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct FocalCell {
    weight: f64,
    log_focal: f64,
}

/// Vote accumulator over (alpha, beta), optionally with a parallel focal
/// histogram. Merging two histograms bin-wise is equivalent to voting on
/// the concatenated input.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteHistogram {
    bin_width: f64,
    bins_per_axis: usize,
    cells: Vec<AngleCell>,
    focal_cells: Vec<FocalCell>,
    focal_log10_range: (f64, f64),
    total_weight: f64,
    /// Number of solver invocations that fed this histogram.
    pub solver_invocations: usize,
}

impl VoteHistogram {
    pub fn new(config: &VoteConfig) -> Self {
        let bins_per_axis = (TAU / config.bin_width_rad).ceil() as usize;
        Self {
            bin_width: config.bin_width_rad,
            bins_per_axis,
            cells: vec![AngleCell::default(); bins_per_axis * bins_per_axis],
            focal_cells: vec![FocalCell::default(); config.focal_bins],
            focal_log10_range: config.focal_log10_range,
            total_weight: 0.0,
            solver_invocations: 0,
        }
    }

    pub fn bins_per_axis(&self) -> usize {
        self.bins_per_axis
    }

    /// Sum of all deposited vote weights.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    fn bin_index(&self, angle: f64) -> usize {
        let idx = ((angle + PI) / self.bin_width).floor() as isize;
        idx.clamp(0, self.bins_per_axis as isize - 1) as usize
    }

    /// Deposits one (alpha, beta) vote, spread over the 3x3 neighborhood.
    pub fn deposit(&mut self, alpha: f64, beta: f64, weight: f64) {
        let k = kernel3();
        let norm: f64 = k.iter().sum::<f64>() * k.iter().sum::<f64>();
        let (ia, ib) = (self.bin_index(alpha), self.bin_index(beta));
        let n = self.bins_per_axis as isize;
        let (sin_a, cos_a) = alpha.sin_cos();
        let (sin_b, cos_b) = beta.sin_cos();
        for (da, ka) in (-1..=1).zip(k) {
            for (db, kb) in (-1..=1).zip(k) {
                let ra = (ia as isize + da).rem_euclid(n) as usize;
                let rb = (ib as isize + db).rem_euclid(n) as usize;
                let w = weight * ka * kb / norm;
                let cell = &mut self.cells[ra * self.bins_per_axis + rb];
                cell.weight += w;
                cell.cos_alpha += w * cos_a;
                cell.sin_alpha += w * sin_a;
                cell.cos_beta += w * cos_b;
                cell.sin_beta += w * sin_b;
            }
        }
        self.total_weight += weight;
    }

    /// Deposits one focal vote (pixels) into the log10 histogram; votes
    /// outside the configured range are dropped.
    pub fn deposit_focal(&mut self, focal_px: f64, weight: f64) {
        if !(focal_px.is_finite() && focal_px > 0.0) {
            return;
        }
        let (lo, hi) = self.focal_log10_range;
        let log_f = focal_px.log10();
        if log_f < lo || log_f > hi {
            return;
        }
        let bins = self.focal_cells.len();
        let pos = ((log_f - lo) / (hi - lo) * bins as f64).floor() as usize;
        let center = pos.min(bins - 1) as isize;
        let k = kernel3();
        // Renormalize over in-range neighbors so the vote mass is conserved
        // at the histogram edges.
        let mut norm = 0.0;
        for (d, kd) in (-1..=1).zip(k) {
            let i = center + d;
            if i >= 0 && (i as usize) < bins {
                norm += kd;
            }
        }
        for (d, kd) in (-1..=1).zip(k) {
            let i = center + d;
            if i >= 0 && (i as usize) < bins {
                let cell = &mut self.focal_cells[i as usize];
                let w = weight * kd / norm;
                cell.weight += w;
                cell.log_focal += w * log_f;
            }
        }
    }

    /// Bin-wise merge; the accumulator is a commutative monoid.
    pub fn merge(&mut self, other: &VoteHistogram) {
        assert_eq!(self.bins_per_axis, other.bins_per_axis, "bin layout mismatch");
        assert_eq!(self.focal_cells.len(), other.focal_cells.len());
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.weight += b.weight;
            a.cos_alpha += b.cos_alpha;
            a.sin_alpha += b.sin_alpha;
            a.cos_beta += b.cos_beta;
            a.sin_beta += b.sin_beta;
        }
        for (a, b) in self.focal_cells.iter_mut().zip(&other.focal_cells) {
            a.weight += b.weight;
            a.log_focal += b.log_focal;
        }
        self.total_weight += other.total_weight;
        self.solver_invocations += other.solver_invocations;
    }

    /// Winning (alpha, beta): the weighted circular mean over the 3x3
    /// neighborhood of the heaviest bin.
    pub fn peak_motion(&self) -> Option<(f64, f64)> {
        let (peak, _) = self
            .cells
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.weight.partial_cmp(&b.weight).expect("finite weights"))?;
        if self.cells[peak].weight <= 0.0 {
            return None;
        }
        let n = self.bins_per_axis as isize;
        let (pa, pb) = ((peak / self.bins_per_axis) as isize, (peak % self.bins_per_axis) as isize);
        let mut acc = AngleCell::default();
        for da in -1..=1 {
            for db in -1..=1 {
                let ra = (pa + da).rem_euclid(n) as usize;
                let rb = (pb + db).rem_euclid(n) as usize;
                let cell = &self.cells[ra * self.bins_per_axis + rb];
                acc.cos_alpha += cell.cos_alpha;
                acc.sin_alpha += cell.sin_alpha;
                acc.cos_beta += cell.cos_beta;
                acc.sin_beta += cell.sin_beta;
            }
        }
        Some((
            acc.sin_alpha.atan2(acc.cos_alpha),
            acc.sin_beta.atan2(acc.cos_beta),
        ))
    }

    /// Winning focal length: the weighted geometric mean over the 3-bin
    /// neighborhood of the heaviest focal bin.
    pub fn peak_focal(&self) -> Option<f64> {
        let (peak, _) = self
            .focal_cells
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.weight.partial_cmp(&b.weight).expect("finite weights"))?;
        if self.focal_cells[peak].weight <= 0.0 {
            return None;
        }
        let bins = self.focal_cells.len() as isize;
        let mut weight = 0.0;
        let mut log_sum = 0.0;
        for d in -1..=1 {
            let i = peak as isize + d;
            if i >= 0 && i < bins {
                weight += self.focal_cells[i as usize].weight;
                log_sum += self.focal_cells[i as usize].log_focal;
            }
        }
        (weight > 0.0).then(|| 10f64.powf(log_sum / weight))
    }
}

/// Robust estimation by weighted histogram voting with a one-point solver
/// (`1ac` or `1acf`).
///
/// Exactly one solver invocation per correspondence; candidates that place
/// their own correspondence behind a camera do not vote.
pub fn histogram_vote(
    correspondences: &[AffineCorrespondence],
    solver: SolverKind,
    config: &VoteConfig,
) -> Result<(PlanarMotion, VoteHistogram), RobustError> {
    if solver.sample_size() != 1 {
        return Err(RobustError::UnsupportedSolver(solver));
    }
    let mut hist = VoteHistogram::new(config);
    for ac in correspondences {
        hist.solver_invocations += 1;
        let Ok(candidates) = solver.solve(std::slice::from_ref(ac)) else {
            continue;
        };
        for cand in &candidates {
            if positive_depth_count(&cand.motion, std::slice::from_ref(ac)) == 0 {
                continue;
            }
            let weight = 1.0 / (1.0 + cand.residual / config.residual_scale);
            hist.deposit(cand.motion.alpha(), cand.motion.beta(), weight);
            if let Some(f) = cand.motion.focal() {
                hist.deposit_focal(f, weight);
            }
        }
    }
    let (alpha, beta) = hist.peak_motion().ok_or(RobustError::NoVotes)?;
    let motion = if solver.semi_calibrated() {
        let focal = hist.peak_focal().ok_or(RobustError::NoVotes)?;
        PlanarMotion::with_focal(alpha, beta, focal).map_err(|_| RobustError::NoVotes)?
    } else {
        PlanarMotion::new(alpha, beta)
    };
    Ok((motion, hist))
}

/// Junk correspondence generator for negative controls in tests and
/// benchmarks: uniformly random point pairs with a well-conditioned random
/// affinity, unrelated to any single motion.
pub fn random_outlier<R: Rng>(rng: &mut R, spread: f64) -> AffineCorrespondence {
    use crate::geometry::NormalizedPoint;
    use rand::RngExt;
    loop {
        let ac = AffineCorrespondence::new(
            NormalizedPoint::new(
                rng.random_range(-spread..spread),
                rng.random_range(-spread..spread),
            ),
            NormalizedPoint::new(
                rng.random_range(-spread..spread),
                rng.random_range(-spread..spread),
            ),
            [
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
            ],
        );
        if ac.affinity_det().abs() > 0.1 {
            return ac;
        }
    }
}
