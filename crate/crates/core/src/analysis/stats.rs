use crate::error::AnalysisError;
use crate::scalar::Scalar;

/// 1-based ranks with ties sharing their mean rank.
pub fn average_ranks<F: Scalar>(values: &[F]) -> Vec<F> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut ranks = vec![F::zero(); values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share rank mean((i+1)..=(j+1))
        let rank = F::from_count(i + j + 2) / F::lit(2.0);
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation; `None` when either side is constant.
pub fn pearson<F: Scalar>(xs: &[F], ys: &[F]) -> Result<Option<F>, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(AnalysisError::TooFewItems { needed: 2, found: xs.len() });
    }
    let n = F::from_count(xs.len());
    let mx = xs.iter().copied().sum::<F>() / n;
    let my = ys.iter().copied().sum::<F>() / n;
    let (mut sxy, mut sxx, mut syy) = (F::zero(), F::zero(), F::zero());
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (*x - mx, *y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == F::zero() || syy == F::zero() {
        return Ok(None);
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(Some(r.max(-F::one()).min(F::one())))
}

/// Spearman rank correlation: Pearson correlation of average ranks.
/// `Ok(None)` marks the undefined case of a constant input.
pub fn spearman<F: Scalar>(xs: &[F], ys: &[F]) -> Result<Option<F>, AnalysisError> {
    if xs.len() != ys.len() {
        return Err(AnalysisError::LengthMismatch(xs.len(), ys.len()));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Randolph's free-marginal kappa for two raters over `q` categories.
pub fn randolph_kappa<F: Scalar, L: PartialEq>(annotations: &[(L, L)], q: usize) -> Result<F, AnalysisError> {
    if q < 2 {
        return Err(AnalysisError::CategoryCount(q));
    }
    if annotations.is_empty() {
        return Err(AnalysisError::TooFewItems { needed: 1, found: 0 });
    }
    let agree = annotations.iter().filter(|(a, b)| a == b).count();
    Ok(kappa_from_counts(agree, annotations.len(), q))
}

pub(crate) fn kappa_from_counts<F: Scalar>(agree: usize, items: usize, q: usize) -> F {
    // (P_obs - 1/q) / (1 - 1/q) rearranged to (q*agree - items) / (items*(q-1)),
    // a single rounding step
    let num = F::from_count(q * agree) - F::from_count(items);
    num / F::from_count(items * (q - 1))
}
