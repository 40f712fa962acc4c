//! Choosing the Topic Achieved threshold that best agrees with human labels.

use serde::Serialize;

use crate::error::AnalysisError;
use crate::scalar::Scalar;
use crate::scoring::TopicSimilarity;

use super::stats::kappa_from_counts;

/// The candidate grid 0.1, 0.2, ..., 0.7.
pub fn default_thresholds<F: Scalar>() -> Vec<F> {
    (1..=7).map(|i| F::from_count(i) / F::lit(10.0)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow<F> {
    pub threshold: F,
    pub agreements: usize,
    pub kappa: F,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration<F> {
    pub rows: Vec<ThresholdRow<F>>,
    pub best: F,
    pub best_kappa: F,
    /// More than one threshold reached the best kappa.
    pub tie: bool,
    /// Fewer than two items; kappa is not informative.
    pub degenerate: bool,
}

/// Picks the threshold whose TA predictions have the highest Randolph's
/// kappa against the human labels; ties go to the smallest threshold.
pub fn calibrate_ta<F: Scalar>(
    human: &[bool],
    thresholds: &[F],
    inputs: &[TopicSimilarity<F>],
) -> Result<Calibration<F>, AnalysisError> {
    if thresholds.is_empty() {
        return Err(AnalysisError::NoThresholds);
    }
    if human.len() != inputs.len() {
        return Err(AnalysisError::LengthMismatch(human.len(), inputs.len()));
    }
    if human.is_empty() {
        return Err(AnalysisError::TooFewItems { needed: 1, found: 0 });
    }
    let mut sorted = thresholds.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let rows: Vec<ThresholdRow<F>> = sorted
        .iter()
        .map(|&t| {
            let agreements = human.iter().zip(inputs).filter(|(h, s)| **h == s.achieved(t)).count();
            ThresholdRow { threshold: t, agreements, kappa: kappa_from_counts(agreements, human.len(), 2) }
        })
        .collect();
    let best_agree = rows.iter().map(|r| r.agreements).max().expect("non-empty");
    let winners: Vec<&ThresholdRow<F>> = rows.iter().filter(|r| r.agreements == best_agree).collect();
    Ok(Calibration {
        best: winners[0].threshold,
        best_kappa: winners[0].kappa,
        tie: winners.len() > 1,
        degenerate: human.len() < 2,
        rows,
    })
}
