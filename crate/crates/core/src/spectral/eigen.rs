//! Smallest eigenpairs of the random-walk Laplacian.
//!
//! `L = D^-1/2 (I - N) D^1/2` with `N` symmetric, so the smallest eigenvalues
//! of `L` are `1 - mu` for the largest eigenvalues `mu` of `N`, and an
//! eigenvector `u` of `N` maps to the eigenvector `D^-1/2 u` of `L`. Small
//! problems use a dense symmetric solver; larger ones a restarted Lanczos
//! iteration on `N`.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{s, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::laplacian::RwLaplacian;
use crate::error::{Error, Result};

/// Largest problem solved densely.
pub const DENSE_EIGEN_LIMIT: usize = 500;

const RESIDUAL_TOL: f64 = 1e-11;
const MAX_RESTARTS: usize = 2000;
const START_SEED: u64 = 0x6c61_6e63_7a6f_7321;

/// Spectral embedding: the first `l` eigenvectors of `L` and the points
/// formed by all but the first.
#[derive(Debug, Clone)]
pub struct Embedding {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `n x l`, unit-norm columns; the entry of largest magnitude in each
    /// column is positive.
    pub vectors: Array2<f64>,
    /// `vectors` without its first column.
    pub points: Array2<f64>,
}

pub fn embed(op: &RwLaplacian, l: usize) -> Result<Embedding> {
    let n = op.n();
    if l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "cannot take {l} eigenvectors of a {n}-vertex operator"
        )));
    }
    let (mu, u) = if n <= DENSE_EIGEN_LIMIT { dense_top(op, l) } else { lanczos_top(op, l)? };

    let mut vectors = Array2::zeros((n, l));
    for (c, uc) in u.iter().take(l).enumerate() {
        let mut v: Vec<f64> = (0..n).map(|i| uc[i] / op.degrees()[i].sqrt()).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let pivot = v
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, &x)| if x.abs() > best.1 { (i, x.abs()) } else { best })
            .0;
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        for x in &mut v {
            *x *= sign / norm;
        }
        vectors.column_mut(c).assign(&ndarray::Array1::from(v));
    }
    let eigenvalues = mu.iter().map(|m| 1.0 - m).collect();
    let points = vectors.slice(s![.., 1..]).to_owned();
    Ok(Embedding { eigenvalues, vectors, points })
}

/// Top `l` eigenpairs of `N`, eigenvalues descending.
fn dense_top(op: &RwLaplacian, l: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let eig = SymmetricEigen::new(op.dense_normalized());
    let mut order: Vec<usize> = (0..op.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let vals = order[..l].iter().map(|&c| eig.eigenvalues[c]).collect();
    let vecs = order[..l].iter().map(|&c| eig.eigenvectors.column(c).iter().copied().collect()).collect();
    (vals, vecs)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Removes the components of `w` along the orthonormal `basis`, twice.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for v in basis {
            let c = dot(w, v);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= c * vi;
            }
        }
    }
}

/// Thick-restart Lanczos with full reorthogonalization. The projected matrix
/// `V^T N V` is formed explicitly from stored products `N V`, and Ritz pairs
/// are accepted on their true residual norms.
fn lanczos_top(op: &RwLaplacian, l: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = op.n();
    let max_dim = n.min((2 * l + 20).max(40));
    let keep = (l + (max_dim - l) / 2).min(max_dim - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut random_unit = |basis: &[Vec<f64>]| -> Option<Vec<f64>> {
        for _ in 0..8 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
            orthogonalize(&mut v, basis);
            let nv = norm(&v);
            if nv > 1e-8 {
                v.iter_mut().for_each(|x| *x /= nv);
                return Some(v);
            }
        }
        None
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_dim);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(max_dim);
    let mut next = random_unit(&basis);
    let mut scratch = Vec::with_capacity(n);
    let mut worst = f64::INFINITY;

    for _restart in 0..MAX_RESTARTS {
        while basis.len() < max_dim {
            let Some(v) = next.take() else { break };
            let mut w = vec![0.0; n];
            op.apply_normalized(&v, &mut w, &mut scratch);
            basis.push(v);
            images.push(w.clone());
            orthogonalize(&mut w, &basis);
            let beta = norm(&w);
            next = if beta > 1e-10 {
                w.iter_mut().for_each(|x| *x /= beta);
                Some(w)
            } else {
                // Invariant subspace found; continue in a fresh direction so
                // repeated eigenvalues are not missed.
                random_unit(&basis)
            };
        }

        let dim = basis.len();
        let h = DMatrix::from_fn(dim, dim, |a, b| {
            0.5 * (dot(&basis[a], &images[b]) + dot(&basis[b], &images[a]))
        });
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

        let combine = |vs: &[Vec<f64>], c: usize| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (a, v) in vs.iter().enumerate() {
                let y = eig.eigenvectors[(a, c)];
                for (o, x) in out.iter_mut().zip(v) {
                    *o += y * x;
                }
            }
            out
        };
        let kept = keep.min(dim);
        let ritz: Vec<Vec<f64>> = order[..kept].iter().map(|&c| combine(&basis, c)).collect();
        let ritz_images: Vec<Vec<f64>> = order[..kept].iter().map(|&c| combine(&images, c)).collect();

        worst = 0.0f64;
        let wanted = l.min(dim);
        for t in 0..wanted {
            let theta = eig.eigenvalues[order[t]];
            let r: f64 =
                ritz_images[t].iter().zip(&ritz[t]).map(|(a, x)| (a - theta * x).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(r);
        }
        if wanted == l && worst <= RESIDUAL_TOL {
            let vals = order[..l].iter().map(|&c| eig.eigenvalues[c]).collect();
            return Ok((vals, ritz.into_iter().take(l).collect()));
        }
        if dim == n {
            // The basis spans the whole space, so the Ritz pairs are exact.
            let vals = order[..l].iter().map(|&c| eig.eigenvalues[c]).collect();
            return Ok((vals, ritz.into_iter().take(l).collect()));
        }

        // Restart from the leading Ritz vectors; the continuation direction
        // is the part of the newest image outside their span.
        let mut cont = next.take().unwrap_or_else(|| images.last().cloned().unwrap());
        basis = ritz;
        images = ritz_images;
        orthogonalize(&mut cont, &basis);
        let nc = norm(&cont);
        next = if nc > 1e-10 {
            cont.iter_mut().for_each(|x| *x /= nc);
            Some(cont)
        } else {
            random_unit(&basis)
        };
    }
    Err(Error::NoConvergence { iterations: MAX_RESTARTS, residual: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::SymmetricSparseMatrix;
    use approx::assert_abs_diff_eq;

    fn clique(n: usize, offset: usize) -> Vec<(usize, usize, f64)> {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i + offset, j + offset, 1.0))).collect()
    }

    fn residual_ok(op: &RwLaplacian, e: &Embedding) {
        let n = op.n();
        for (c, &lambda) in e.eigenvalues.iter().enumerate() {
            let v: Vec<f64> = e.vectors.column(c).to_vec();
            let mut lv = vec![0.0; n];
            op.apply(&v, &mut lv);
            let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let r = lv.iter().zip(&v).fold(0.0f64, |m, (a, b)| m.max((a - lambda * b).abs()));
            assert!(r <= 1e-8 * vmax, "residual {r}");
        }
    }

    #[test]
    fn complete_graph_spectrum() {
        let m = SymmetricSparseMatrix::from_triplets(4, clique(4, 0)).unwrap();
        let op = RwLaplacian::new(&m).unwrap();
        let e = embed(&op, 4).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 0.0, epsilon = 1e-12);
        for &v in &e.eigenvalues[1..] {
            assert_abs_diff_eq!(v, 4.0 / 3.0, epsilon = 1e-12);
        }
        residual_ok(&op, &e);
    }

    #[test]
    fn disconnected_cliques_have_double_zero() {
        let mut t = clique(4, 0);
        t.extend(clique(4, 4));
        let m = SymmetricSparseMatrix::from_triplets(8, t).unwrap();
        let e = embed(&RwLaplacian::new(&m).unwrap(), 3).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.eigenvalues[1], 0.0, epsilon = 1e-12);
        assert!(e.eigenvalues[2] > 0.5);
    }

    #[test]
    fn path_has_constant_first_vector() {
        let m = SymmetricSparseMatrix::from_triplets(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let e = embed(&RwLaplacian::new(&m).unwrap(), 2).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], 0.0, epsilon = 1e-12);
        let c = e.vectors.column(0);
        for x in c.iter() {
            assert_abs_diff_eq!(*x, c[0], epsilon = 1e-12);
            assert!(*x > 0.0);
        }
        assert_eq!(e.points.ncols(), 1);
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        // ring of 8 cliques joined by single edges, above the dense limit
        let size = 70;
        let blocks = 8;
        let n = size * blocks;
        let mut t = Vec::new();
        for b in 0..blocks {
            for i in 0..size {
                for j in i + 1..size {
                    if (i * 7 + j * 3 + b) % 4 == 0 {
                        t.push((b * size + i, b * size + j, 1.0 + ((i + j) % 3) as f64));
                    }
                }
                t.push((b * size + i, b * size + (i + 1) % size, 1.0));
            }
            t.push((b * size, ((b + 1) % blocks) * size + 1, 0.5));
        }
        let m = SymmetricSparseMatrix::from_triplets(n, t).unwrap();
        let op = RwLaplacian::new(&m).unwrap();
        let (mu_l, _) = lanczos_top(&op, 4).unwrap();
        let (mu_d, _) = dense_top(&op, 4);
        for (a, b) in mu_l.iter().zip(&mu_d) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
        let e = embed(&op, 4).unwrap();
        residual_ok(&op, &e);
        let ev = &e.eigenvalues;
        assert!(ev.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }
}
