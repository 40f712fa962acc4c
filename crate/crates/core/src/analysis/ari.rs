use std::collections::HashMap;

use crate::error::AnalysisError;
use crate::scalar::Scalar;

fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Adjusted Rand Index (Hubert and Arabie) between two labelings of the
/// same items, computed from their contingency table. Labels are arbitrary
/// identifiers; only the induced partitions matter.
pub fn adjusted_rand_index<F: Scalar, A, B>(labels_a: &[A], labels_b: &[B]) -> Result<F, AnalysisError>
where
    A: Eq + std::hash::Hash,
    B: Eq + std::hash::Hash,
{
    if labels_a.len() != labels_b.len() {
        return Err(AnalysisError::LengthMismatch(labels_a.len(), labels_b.len()));
    }
    let n = labels_a.len();
    if n < 2 {
        return Err(AnalysisError::TooFewItems { needed: 2, found: n });
    }
    let mut cells: HashMap<(&A, &B), u64> = HashMap::new();
    let mut rows: HashMap<&A, u64> = HashMap::new();
    let mut cols: HashMap<&B, u64> = HashMap::new();
    for (a, b) in labels_a.iter().zip(labels_b) {
        *cells.entry((a, b)).or_default() += 1;
        *rows.entry(a).or_default() += 1;
        *cols.entry(b).or_default() += 1;
    }
    let index: u64 = cells.values().map(|&c| pairs(c)).sum();
    let sum_a: u64 = rows.values().map(|&c| pairs(c)).sum();
    let sum_b: u64 = cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(n as u64);

    // Both partitions all-singletons or both one block: identical partitions.
    if sum_a == sum_b && (sum_a == 0 || sum_a == total) {
        return Ok(F::one());
    }
    let f = |x: u64| F::from_u64(x).expect("count representable");
    let expected = f(sum_a) * f(sum_b) / f(total);
    let max_index = (f(sum_a) + f(sum_b)) / F::lit(2.0);
    let denom = max_index - expected;
    if denom == F::zero() {
        return Ok(F::one());
    }
    Ok((f(index) - expected) / denom)
}
