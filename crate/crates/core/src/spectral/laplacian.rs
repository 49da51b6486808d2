use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, SymmetricSparseMatrix};

/// Random-walk Laplacian `I - D^-1 G` as an explicit sparse matrix.
pub fn rw_laplacian(m: &SymmetricSparseMatrix) -> Result<CsrMatrix> {
    let op = RwLaplacian::new(m)?;
    let n = m.n();
    let mut triplets = Vec::with_capacity(op.adjacency.nnz() + n);
    for i in 0..n {
        triplets.push((i, i, 1.0));
        let (cols, vals) = op.adjacency.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            triplets.push((i, j, -v / op.degrees[i]));
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, triplets))
}

/// Regularized random-walk Laplacian `I - (D + tau I)^-1 (G + tau/n 11^T)`.
pub fn regularized_rw_laplacian(m: &SymmetricSparseMatrix, tau: f64) -> Result<RwLaplacian> {
    RwLaplacian::regularized(m, tau)
}

/// The (possibly regularized) random-walk Laplacian kept as a sparse matrix
/// plus a rank-one term.
#[derive(Debug, Clone)]
pub struct RwLaplacian {
    adjacency: CsrMatrix,
    /// `d_i + tau`.
    degrees: Vec<f64>,
    tau: f64,
}

impl RwLaplacian {
    pub fn new(m: &SymmetricSparseMatrix) -> Result<Self> {
        Self::regularized(m, 0.0)
    }

    pub fn regularized(m: &SymmetricSparseMatrix, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidParameter(format!("tau must be finite and non-negative, got {tau}")));
        }
        let adjacency = m.to_full();
        let mut degrees = m.degrees();
        for (i, d) in degrees.iter_mut().enumerate() {
            *d += tau;
            if *d <= 0.0 {
                return Err(Error::ZeroDegree(i));
            }
        }
        Ok(RwLaplacian { adjacency, degrees, tau })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Regularized degrees `d_i + tau`.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    fn rank_one(&self, x: &[f64]) -> f64 {
        if self.tau == 0.0 {
            0.0
        } else {
            self.tau / self.n() as f64 * x.iter().sum::<f64>()
        }
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let shift = self.rank_one(x);
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let (cols, vals) = self.adjacency.row(i);
            let gx: f64 = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
            *yi = x[i] - (gx + shift) / self.degrees[i];
        });
    }

    /// `y = N u` with `N = D^-1/2 (G + tau/n 11^T) D^-1/2`, so that
    /// `L = D^-1/2 (I - N) D^1/2`.
    pub(crate) fn apply_normalized(&self, u: &[f64], y: &mut [f64], scratch: &mut Vec<f64>) {
        scratch.clear();
        scratch.extend(u.iter().zip(&self.degrees).map(|(&ui, &d)| ui / d.sqrt()));
        let x = &scratch[..];
        let shift = self.rank_one(x);
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let (cols, vals) = self.adjacency.row(i);
            let gx: f64 = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
            *yi = (gx + shift) / self.degrees[i].sqrt();
        });
    }

    pub(crate) fn dense_normalized(&self) -> nalgebra::DMatrix<f64> {
        let n = self.n();
        let c = self.tau / n as f64;
        let mut out = nalgebra::DMatrix::from_element(n, n, c);
        for (i, j, v) in self.adjacency.iter() {
            out[(i, j)] += v;
        }
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] /= (self.degrees[i] * self.degrees[j]).sqrt();
            }
        }
        out
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.n();
        let c = self.tau / n as f64;
        let mut out = Array2::from_elem((n, n), -c);
        for (i, j, v) in self.adjacency.iter() {
            out[[i, j]] -= v;
        }
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] /= self.degrees[i];
            }
            out[[i, i]] += 1.0;
        }
        out
    }
}
