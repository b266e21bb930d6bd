//! Lagrangian mode decision.

use crate::{Error, Result};

/// Candidate predictors evaluated for a P-frame macroblock, in tie-break
/// order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CandidateKind {
    Skip,
    Inter16,
    Inter16Refined,
    Inter8,
    Inter8Refined,
    IntraDc,
}

impl CandidateKind {
    pub fn is_refined(self) -> bool {
        matches!(
            self,
            CandidateKind::Inter16Refined | CandidateKind::Inter8Refined
        )
    }

    /// Purely temporal or spatial candidates, i.e. those available with
    /// refinement disabled.
    pub fn is_unrefined(self) -> bool {
        !self.is_refined()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub kind: CandidateKind,
    /// Sum of squared errors of the reconstruction.
    pub distortion: u64,
    /// Bits needed to code the macroblock with this candidate.
    pub rate: u32,
}

impl Candidate {
    pub fn cost(&self, lambda: f64) -> f64 {
        self.distortion as f64 + lambda * f64::from(self.rate)
    }
}

/// `0.85 * 2^((qp - 12) / 3)`.
pub fn rd_lambda(qp: u8) -> f64 {
    0.85 * ((f64::from(qp) - 12.0) / 3.0).exp2()
}

/// Index of the candidate minimizing `D + lambda * R`. The earliest entry
/// wins on equal cost.
pub fn mode_decide(candidates: &[Candidate], lambda: f64) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in candidates.iter().enumerate() {
        let j = c.cost(lambda);
        if best.is_none_or(|(_, b)| j < b) {
            best = Some((i, j));
        }
    }
    best.map(|(i, _)| i).ok_or(Error::NoCandidates)
}
