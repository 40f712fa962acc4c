use std::collections::BTreeMap;

use crate::error::AnalysisError;
use crate::scalar::Scalar;

fn dist<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(x, y)| (*x - *y) * (*x - *y)).sum::<F>().sqrt()
}

/// Mean silhouette coefficient with Euclidean distance. Points in singleton
/// clusters contribute 0, as do points with `a = b = 0`.
pub fn silhouette<F: Scalar>(points: &[Vec<F>], labels: &[usize]) -> Result<F, AnalysisError> {
    if points.len() != labels.len() {
        return Err(AnalysisError::LengthMismatch(points.len(), labels.len()));
    }
    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        clusters.entry(l).or_default().push(i);
    }
    if clusters.len() < 2 {
        return Err(AnalysisError::SingleCluster);
    }
    let mut total = F::zero();
    for (i, p) in points.iter().enumerate() {
        let own = &clusters[&labels[i]];
        if own.len() < 2 {
            continue;
        }
        let mean_to = |members: &[usize]| {
            let s: F = members.iter().filter(|&&j| j != i).map(|&j| dist(p, &points[j])).sum();
            let count = members.iter().filter(|&&j| j != i).count();
            s / F::from_count(count)
        };
        let a = mean_to(own);
        let b = clusters
            .iter()
            .filter(|(l, _)| **l != labels[i])
            .map(|(_, members)| mean_to(members))
            .fold(F::infinity(), F::min);
        let denom = a.max(b);
        if denom > F::zero() {
            total += (b - a) / denom;
        }
    }
    Ok(total / F::from_count(points.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_points_give_zero() {
        let pts = vec![vec![1.0, 1.0]; 6];
        assert_eq!(silhouette(&pts, &[0, 0, 0, 1, 1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn single_cluster_is_error() {
        let pts = vec![vec![0.0], vec![1.0]];
        assert_eq!(silhouette(&pts, &[3, 3]).unwrap_err(), AnalysisError::SingleCluster);
    }

    #[test]
    fn two_point_clusters_by_hand() {
        // clusters {0, 1} and {10, 11} on a line
        let pts: Vec<Vec<f64>> = [0.0, 1.0, 10.0, 11.0].iter().map(|x| vec![*x]).collect();
        let s = silhouette(&pts, &[0, 0, 1, 1]).unwrap();
        // point 0: a=1, b=10.5; point 1: a=1, b=9.5; symmetric for the others
        let expected = ((9.5 / 10.5) + (8.5 / 9.5)) / 2.0;
        assert!((s - expected).abs() < 1e-12);
    }

    #[test]
    fn singleton_contributes_zero() {
        let pts: Vec<Vec<f64>> = [0.0, 1.0, 10.0].iter().map(|x| vec![*x]).collect();
        let s = silhouette(&pts, &[0, 0, 1]).unwrap();
        let expected = ((9.0 / 10.0) + (8.0 / 9.0)) / 3.0;
        assert!((s - expected).abs() < 1e-12);
    }
}
