//! Lloyd's algorithm with k-means++ seeding and best-of-restarts selection.

use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::canonicalize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once no centroid moves by more than this (squared distance).
    pub tol: f64,
    pub seed: u64,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansConfig { k, restarts: 10, max_iters: 300, tol: 1e-10, seed }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    /// Labels canonicalized by order of first occurrence.
    pub labels: Vec<usize>,
    pub centroids: Array2<f64>,
    /// Within-cluster sum of squares of the selected run.
    pub wcss: f64,
    /// WCSS after each assignment step of the selected run.
    pub history: Vec<f64>,
    /// Final WCSS of every restart, by restart index.
    pub restart_wcss: Vec<f64>,
}

fn sq_dist(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn kmeans_pp(points: ArrayView2<'_, f64>, cfg: &KMeansConfig) -> Result<KMeansResult> {
    let rows = points.nrows();
    if cfg.k == 0 || cfg.k > rows {
        return Err(Error::InvalidParameter(format!("cannot form {} clusters from {rows} points", cfg.k)));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            lloyd(points, cfg, &mut rng)
        })
        .collect();
    let restart_wcss: Vec<f64> = runs.iter().map(|r| r.history[r.history.len() - 1]).collect();
    let best = (0..runs.len())
        .min_by(|&a, &b| restart_wcss[a].total_cmp(&restart_wcss[b]).then(a.cmp(&b)))
        .expect("at least one restart");
    let Run { mut labels, centroids, history } = runs.into_iter().nth(best).unwrap();

    // Reorder centroid rows to match canonical labels.
    let original = labels.clone();
    canonicalize(&mut labels);
    let mut ordered = centroids.clone();
    for (o, c) in original.iter().zip(&labels) {
        ordered.row_mut(*c).assign(&centroids.row(*o));
    }
    Ok(KMeansResult { labels, centroids: ordered, wcss: restart_wcss[best], history, restart_wcss })
}

struct Run {
    labels: Vec<usize>,
    centroids: Array2<f64>,
    history: Vec<f64>,
}

fn seed_centroids(points: ArrayView2<'_, f64>, k: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let rows = points.nrows();
    let mut centroids = Array2::zeros((k, points.ncols()));
    let first = rng.random_range(0..rows);
    centroids.row_mut(0).assign(&points.row(first));
    let mut d2: Vec<f64> = (0..rows).map(|i| sq_dist(points.row(i), points.row(first))).collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = rows - 1;
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if acc > target && d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..rows)
        };
        centroids.row_mut(c).assign(&points.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(points.row(i), points.row(pick)));
        }
    }
    centroids
}

fn lloyd(points: ArrayView2<'_, f64>, cfg: &KMeansConfig, rng: &mut ChaCha8Rng) -> Run {
    let (rows, dim) = points.dim();
    let k = cfg.k;
    let mut centroids = seed_centroids(points, k, rng);
    let mut labels = vec![usize::MAX; rows];
    let mut dist = vec![0.0; rows];
    let mut history = Vec::new();

    for _ in 0..cfg.max_iters.max(1) {
        let mut changed = false;
        for i in 0..rows {
            let (mut best, mut best_d) = (0, f64::INFINITY);
            for c in 0..k {
                let d = sq_dist(points.row(i), centroids.row(c));
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            changed |= labels[i] != best;
            labels[i] = best;
            dist[i] = best_d;
        }
        history.push(dist.iter().sum());
        if !changed {
            break;
        }

        let mut sums = Array2::<f64>::zeros((k, dim));
        let mut counts = vec![0usize; k];
        for i in 0..rows {
            sums.row_mut(labels[i]).scaled_add(1.0, &points.row(i));
            counts[labels[i]] += 1;
        }
        let mut shift = 0.0f64;
        for (c, &count) in counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let mean = sums.row(c).mapv(|v| v / count as f64);
            shift = shift.max(sq_dist(mean.view(), centroids.row(c)));
            centroids.row_mut(c).assign(&mean);
        }
        // Empty clusters restart at the point farthest from its centroid.
        for c in 0..k {
            if counts[c] != 0 {
                continue;
            }
            let far = (0..rows)
                .map(|i| (i, sq_dist(points.row(i), centroids.row(labels[i]))))
                .fold((0, -1.0), |b, (i, d)| if d > b.1 { (i, d) } else { b })
                .0;
            centroids.row_mut(c).assign(&points.row(far));
            counts[labels[far]] -= 1;
            labels[far] = c;
            counts[c] = 1;
            shift = f64::INFINITY;
        }
        if shift <= cfg.tol {
            // Centroids are (numerically) fixed; one more assignment would not
            // change anything.
            break;
        }
    }
    Run { labels, centroids, history }
}
