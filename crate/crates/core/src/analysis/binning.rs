use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "F: Scalar"))]
pub struct BinningConfig<F> {
    pub ari_edges: Vec<F>,
    pub overlap_edges: Vec<F>,
    pub integrated_edges: Vec<F>,
}

impl<F: Scalar> Default for BinningConfig<F> {
    fn default() -> Self {
        let v = |xs: &[f64]| xs.iter().map(|x| F::lit(*x)).collect();
        Self {
            ari_edges: v(&[-0.5, 0.0, 0.5, 1.0]),
            overlap_edges: v(&[0.0, 0.75, 1.5, 2.25, 3.0]),
            integrated_edges: v(&[0.0, 0.25, 0.5, 0.75, 1.0]),
        }
    }
}

/// Where a value lands among the bins defined by `edges`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    InRange(usize),
    /// Outside the edges; assigned to the nearest terminal bin.
    Clamped(usize),
    Invalid,
}

pub fn check_edges<F: Scalar>(edges: &[F]) -> Result<(), AnalysisError> {
    if edges.len() < 2 || edges.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(AnalysisError::BadEdges);
    }
    Ok(())
}

/// The first bin is closed on both sides, later bins are left-open:
/// `[e0, e1] (e1, e2] ...`.
pub fn place<F: Scalar>(value: F, edges: &[F]) -> Placement {
    let last = edges.len() - 2;
    if value.is_nan() {
        return Placement::Invalid;
    }
    if value < edges[0] {
        return Placement::Clamped(0);
    }
    if value > edges[edges.len() - 1] {
        return Placement::Clamped(last);
    }
    let bin = edges[1..].iter().position(|hi| value <= *hi).expect("value within edges");
    Placement::InRange(bin)
}

pub fn bin_label<F: Scalar>(edges: &[F], bin: usize) -> String {
    let open = if bin == 0 { '[' } else { '(' };
    format!("{open}{:?}, {:?}]", edges[bin].to_f64_lossy(), edges[bin + 1].to_f64_lossy())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bin<F> {
    pub label: String,
    pub lo: F,
    pub hi: F,
    pub count: usize,
    /// `None` for an empty bin.
    pub mean: Option<F>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedScores<F, K> {
    pub bins: Vec<Bin<F>>,
    /// Keys whose metric fell outside the edges (clamped) or was NaN (skipped).
    pub flagged: Vec<K>,
}

/// Groups `(key, metric, score)` triples by metric bin and averages the
/// scores per bin.
pub fn bin_scores<F: Scalar, K: Clone>(values: &[(K, F, F)], edges: &[F]) -> Result<BinnedScores<F, K>, AnalysisError> {
    check_edges(edges)?;
    let mut members: Vec<Vec<F>> = vec![Vec::new(); edges.len() - 1];
    let mut flagged = Vec::new();
    for (key, metric, score) in values {
        match place(*metric, edges) {
            Placement::InRange(b) => members[b].push(*score),
            Placement::Clamped(b) => {
                members[b].push(*score);
                flagged.push(key.clone());
            }
            Placement::Invalid => flagged.push(key.clone()),
        }
    }
    let bins = members
        .iter()
        .enumerate()
        .map(|(b, scores)| Bin {
            label: bin_label(edges, b),
            lo: edges[b],
            hi: edges[b + 1],
            count: scores.len(),
            mean: crate::scalar::mean_order_insensitive(scores),
        })
        .collect();
    Ok(BinnedScores { bins, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_convention() {
        let cfg = BinningConfig::<f64>::default();
        assert_eq!(place(0.0, &cfg.ari_edges), Placement::InRange(0));
        assert_eq!(place(-0.5, &cfg.ari_edges), Placement::InRange(0));
        assert_eq!(place(0.5, &cfg.ari_edges), Placement::InRange(1));
        assert_eq!(place(0.50001, &cfg.ari_edges), Placement::InRange(2));
        assert_eq!(place(-0.9, &cfg.ari_edges), Placement::Clamped(0));
        assert_eq!(place(0.75, &cfg.overlap_edges), Placement::InRange(0));
        assert_eq!(place(2.25, &cfg.overlap_edges), Placement::InRange(2));
        assert_eq!(place(3.25, &cfg.overlap_edges), Placement::Clamped(3));
    }

    #[test]
    fn labels() {
        let cfg = BinningConfig::<f64>::default();
        assert_eq!(bin_label(&cfg.ari_edges, 0), "[-0.5, 0.0]");
        assert_eq!(bin_label(&cfg.ari_edges, 1), "(0.0, 0.5]");
    }

    #[test]
    fn means_counts_and_empty_bins() {
        let edges = [0.0, 1.0, 2.0, 3.0];
        let vals = vec![("a", 0.5, 1.0), ("b", 0.7, 0.0), ("c", 2.5, 0.25), ("d", 9.0, 0.75)];
        let out = bin_scores(&vals, &edges).unwrap();
        assert_eq!(out.bins[0].count, 2);
        assert_eq!(out.bins[0].mean, Some(0.5));
        assert_eq!(out.bins[1].count, 0);
        assert_eq!(out.bins[1].mean, None);
        assert_eq!(out.bins[2].mean, Some(0.5));
        assert_eq!(out.flagged, vec!["d"]);
    }

    #[test]
    fn bad_edges() {
        assert_eq!(bin_scores::<f64, ()>(&[], &[0.0, 0.0]).unwrap_err(), AnalysisError::BadEdges);
        assert_eq!(bin_scores::<f64, ()>(&[], &[0.0]).unwrap_err(), AnalysisError::BadEdges);
    }
}
