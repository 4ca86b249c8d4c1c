//! Motion hypotheses produced by the minimal solvers.

use crate::geometry::{angles_equal, PlanarMotion};

/// A single motion hypothesis with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionCandidate {
    pub motion: PlanarMotion,
    /// Algebraic residual `|| B x ||` of the hypothesis on the constraints
    /// it was solved from.
    pub residual: f64,
    /// Gap between the two independent focal estimates of the
    /// semi-calibrated solver; `None` for calibrated candidates.
    pub focal_gap: Option<f64>,
}

impl MotionCandidate {
    pub fn calibrated(motion: PlanarMotion, residual: f64) -> Self {
        Self {
            motion,
            residual,
            focal_gap: None,
        }
    }
}

/// Ordered, non-empty list of motion hypotheses awaiting cheirality or
/// consistency disambiguation. Candidates are distinct modulo `2*pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub(crate) candidates: Vec<MotionCandidate>,
}

impl CandidateSet {
    pub(crate) fn from_candidates(candidates: Vec<MotionCandidate>) -> Self {
        debug_assert!(!candidates.is_empty());
        Self { candidates }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MotionCandidate> {
        self.candidates.iter()
    }

    pub fn as_slice(&self) -> &[MotionCandidate] {
        &self.candidates
    }

    /// First candidate in solver order.
    pub fn first(&self) -> &MotionCandidate {
        &self.candidates[0]
    }

    /// Candidate closest to `motion` in the max of the two angle errors.
    pub fn closest_to(&self, motion: &PlanarMotion) -> &MotionCandidate {
        self.candidates
            .iter()
            .min_by(|a, b| {
                let ea = worst_angle_error(&a.motion, motion);
                let eb = worst_angle_error(&b.motion, motion);
                ea.partial_cmp(&eb).expect("finite angle errors")
            })
            .expect("candidate set is non-empty")
    }

    /// True when some candidate matches `motion` within `tol` radians in
    /// both angles (modulo `2*pi`).
    pub fn contains_motion(&self, motion: &PlanarMotion, tol: f64) -> bool {
        self.candidates.iter().any(|c| {
            angles_equal(c.motion.alpha(), motion.alpha(), tol)
                && angles_equal(c.motion.beta(), motion.beta(), tol)
        })
    }
}

impl<'a> IntoIterator for &'a CandidateSet {
    type Item = &'a MotionCandidate;
    type IntoIter = std::slice::Iter<'a, MotionCandidate>;

    fn into_iter(self) -> Self::IntoIter {
        self.candidates.iter()
    }
}

fn worst_angle_error(a: &PlanarMotion, b: &PlanarMotion) -> f64 {
    let (da, db) = a.angle_errors(b);
    da.max(db)
}

/// Appends `candidate` unless an angle-equal one (modulo `2*pi`) is already
/// present.
pub(crate) fn push_distinct(
    candidates: &mut Vec<MotionCandidate>,
    candidate: MotionCandidate,
    tol: f64,
) {
    let dup = candidates.iter().any(|c| {
        angles_equal(c.motion.alpha(), candidate.motion.alpha(), tol)
            && angles_equal(c.motion.beta(), candidate.motion.beta(), tol)
    });
    if !dup {
        candidates.push(candidate);
    }
}
