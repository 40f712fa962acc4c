//! Seeded Lloyd k-means with k-means++ initialization and restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ClusterError;
use crate::gamegen::derive_seed;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iterations: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self { restarts: 10, max_iterations: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering<F> {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<F>>,
    /// Within-cluster sum of squared distances.
    pub inertia: F,
}

fn sq_dist<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(x, y)| (*x - *y) * (*x - *y)).sum()
}

fn nearest<F: Scalar>(p: &[F], centroids: &[Vec<F>]) -> (usize, F) {
    let mut best = (0, F::infinity());
    for (i, c) in centroids.iter().enumerate() {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

fn plus_plus<F: Scalar>(points: &[Vec<F>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<F>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut dist: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0]).to_f64_lossy()).collect();
    while centroids.len() < k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = points.len() - 1;
            for (i, d) in dist.iter().enumerate() {
                if *d > 0.0 && target < *d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            // guard against rounding walking past the last positive weight
            if dist[chosen] == 0.0 {
                chosen = dist.iter().rposition(|d| *d > 0.0).unwrap_or(chosen);
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        let c = points[pick].clone();
        for (d, p) in dist.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c).to_f64_lossy());
        }
        centroids.push(c);
    }
    centroids
}

fn lloyd<F: Scalar>(points: &[Vec<F>], mut centroids: Vec<Vec<F>>, max_iterations: usize) -> Clustering<F> {
    let k = centroids.len();
    let dim = points[0].len();
    let mut labels = vec![usize::MAX; points.len()];
    for _ in 0..max_iterations {
        let mut changed = false;
        for (label, p) in labels.iter_mut().zip(points) {
            let (c, _) = nearest(p, &centroids);
            if *label != c {
                *label = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![F::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (label, p) in labels.iter().zip(points) {
            counts[*label] += 1;
            for (s, x) in sums[*label].iter_mut().zip(p) {
                *s += *x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                let n = F::from_count(counts[c]);
                centroids[c] = sums[c].iter().map(|s| *s / n).collect();
            } else {
                // reseed an empty cluster at the point farthest from its centroid
                let far = points
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| counts[labels[*i]] > 1)
                    .map(|(i, p)| (i, sq_dist(p, &centroids[labels[i]])))
                    .fold(None, |best: Option<(usize, F)>, (i, d)| match best {
                        Some((_, bd)) if bd >= d => best,
                        _ => Some((i, d)),
                    });
                if let Some((i, _)) = far {
                    counts[labels[i]] -= 1;
                    counts[c] = 1;
                    labels[i] = c;
                    centroids[c] = points[i].clone();
                }
            }
        }
    }
    let inertia = labels.iter().zip(points).map(|(l, p)| sq_dist(p, &centroids[*l])).sum();
    Clustering { labels, centroids, inertia }
}

/// Clusters `points` into `k` groups with default options.
pub fn kmeans<F: Scalar>(points: &[Vec<F>], k: usize, seed: u64) -> Result<Clustering<F>, ClusterError> {
    kmeans_with(points, k, seed, &KMeansOptions::default())
}

/// Runs `restarts` independently seeded k-means++ / Lloyd passes and keeps
/// the lowest inertia, earliest restart on ties.
pub fn kmeans_with<F: Scalar>(
    points: &[Vec<F>],
    k: usize,
    seed: u64,
    opts: &KMeansOptions,
) -> Result<Clustering<F>, ClusterError> {
    if k == 0 {
        return Err(ClusterError::ZeroClusters);
    }
    if k > points.len() {
        return Err(ClusterError::TooFewPoints { k, points: points.len() });
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(ClusterError::Ragged);
    }
    let mut best: Option<Clustering<F>> = None;
    for r in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k, dim, r as u64));
        let init = plus_plus(points, k, &mut rng);
        let run = lloyd(points, init, opts.max_iterations.max(1));
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}
