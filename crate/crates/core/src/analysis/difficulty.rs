//! Integrated game difficulty: group count, ARI and word overlap projected
//! onto [0, 1] and combined with signed weights.

use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "F: Scalar"))]
pub struct DifficultyWeights<F> {
    pub w_count: F,
    pub w_ari: F,
    pub w_overlap: F,
    pub count_range: (F, F),
    pub ari_range: (F, F),
    pub overlap_range: (F, F),
}

impl<F: Scalar> Default for DifficultyWeights<F> {
    fn default() -> Self {
        Self {
            w_count: F::lit(1.0),
            w_ari: F::lit(-0.9),
            w_overlap: F::lit(0.8),
            count_range: (F::lit(2.0), F::lit(4.0)),
            ari_range: (F::lit(-1.0), F::lit(1.0)),
            overlap_range: (F::lit(0.0), F::lit(3.0)),
        }
    }
}

impl<F: Scalar> DifficultyWeights<F> {
    /// Lowest and highest attainable weighted sums.
    pub fn raw_range(&self) -> (F, F) {
        let lo = |w: F| w.min(F::zero());
        let hi = |w: F| w.max(F::zero());
        (
            lo(self.w_count) + lo(self.w_ari) + lo(self.w_overlap),
            hi(self.w_count) + hi(self.w_ari) + hi(self.w_overlap),
        )
    }
}

fn project<F: Scalar>(value: F, (lo, hi): (F, F)) -> F {
    (value - lo) / (hi - lo)
}

fn check<F: Scalar>(name: &'static str, value: F, (lo, hi): (F, F)) -> Result<(), AnalysisError> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(AnalysisError::OutOfRange { name, value: value.to_f64_lossy(), lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() })
    }
}

/// Weighted sum of the projected metrics before the final rescaling.
pub fn raw_difficulty<F: Scalar>(m: usize, ari: F, overlap: F, w: &DifficultyWeights<F>) -> Result<F, AnalysisError> {
    let count = F::from_count(m);
    check("group count", count, w.count_range)?;
    check("ari", ari, w.ari_range)?;
    if overlap.is_nan() || overlap < w.overlap_range.0 {
        return Err(AnalysisError::OutOfRange {
            name: "word overlap",
            value: overlap.to_f64_lossy(),
            lo: w.overlap_range.0.to_f64_lossy(),
            hi: f64::INFINITY,
        });
    }
    let overlap = overlap.min(w.overlap_range.1);
    Ok(w.w_count * project(count, w.count_range)
        + w.w_ari * project(ari, w.ari_range)
        + w.w_overlap * project(overlap, w.overlap_range))
}

/// Integrated difficulty in [0, 1]. Overlap above its range is clamped.
pub fn integrated_difficulty<F: Scalar>(m: usize, ari: F, overlap: F, w: &DifficultyWeights<F>) -> Result<F, AnalysisError> {
    let raw = raw_difficulty(m, ari, overlap, w)?;
    let (lo, hi) = w.raw_range();
    Ok(project(raw, (lo, hi)).max(F::zero()).min(F::one()))
}
