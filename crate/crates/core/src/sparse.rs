//! Compressed sparse row storage.
//!
//! [`CsrMatrix`] is a general real matrix with sorted column indices per row.
//! [`SymmetricSparseMatrix`] stores a symmetric matrix as its upper triangle
//! (diagonal included) in the same layout; it carries MAMs and similarity
//! matrices between modules.

use ndarray::Array2;

use crate::error::{Error, Result};

/// General sparse matrix in CSR layout with sorted, unique column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix { nrows, ncols, indptr: vec![0; nrows + 1], indices: Vec::new(), values: Vec::new() }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Repeated coordinates
    /// are summed in input order; explicit zeros are kept.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        debug_assert!(entries.iter().all(|&(r, c, _)| r < nrows && c < ncols));
        entries.sort_by_key(|&(r, c, _)| (r, c));

        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix { nrows, ncols, indptr, indices, values }
    }

    /// Assembles a matrix from raw CSR arrays. Column indices must be sorted
    /// and unique within each row.
    pub fn from_parts(
        nrows: usize,
        ncols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        assert_eq!(indptr.len(), nrows + 1);
        assert_eq!(indices.len(), values.len());
        assert_eq!(*indptr.last().unwrap(), indices.len());
        debug_assert!((0..nrows).all(|r| {
            let row = &indices[indptr[r]..indptr[r + 1]];
            row.windows(2).all(|w| w[0] < w[1]) && row.iter().all(|&c| c < ncols)
        }));
        CsrMatrix { nrows, ncols, indptr, indices, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[range.clone()], &self.values[range])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    }

    /// Iterates over stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.ncols {
            counts[c + 1] += counts[c];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // Rows are visited in ascending order, so each output row stays sorted.
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let dst = next[j];
                indices[dst] = i;
                values[dst] = v;
                next[j] += 1;
            }
        }
        CsrMatrix { nrows: self.ncols, ncols: self.nrows, indptr, indices, values }
    }

    /// Same sparsity pattern with every value replaced by `f(value)`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CsrMatrix {
        CsrMatrix { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }

    /// Keeps the entries for which `keep(row, col, value)` holds.
    pub fn filter(&self, keep: impl Fn(usize, usize, f64) -> bool) -> CsrMatrix {
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        indptr.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if keep(i, j, v) {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix { nrows: self.nrows, ncols: self.ncols, indptr, indices, values }
    }

    /// Entry-wise sum `self + scale * other`; the result pattern is the union.
    pub fn add_scaled(&self, other: &CsrMatrix, scale: f64) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut indptr = Vec::with_capacity(self.nrows + 1);
        indptr.push(0);
        let mut indices = Vec::with_capacity(self.nnz().max(other.nnz()));
        let mut values = Vec::with_capacity(self.nnz().max(other.nnz()));
        for i in 0..self.nrows {
            let (ac, av) = self.row(i);
            let (bc, bv) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ac.len() || q < bc.len() {
                let take_a = q >= bc.len() || (p < ac.len() && ac[p] < bc[q]);
                let take_b = p >= ac.len() || (q < bc.len() && bc[q] < ac[p]);
                if take_a {
                    indices.push(ac[p]);
                    values.push(av[p]);
                    p += 1;
                } else if take_b {
                    indices.push(bc[q]);
                    values.push(scale * bv[q]);
                    q += 1;
                } else {
                    indices.push(ac[p]);
                    values.push(av[p] + scale * bv[q]);
                    p += 1;
                    q += 1;
                }
            }
            indptr.push(indices.len());
        }
        CsrMatrix { nrows: self.nrows, ncols: self.ncols, indptr, indices, values }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.nrows).map(|i| self.row(i).1.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.ncols];
        for (&j, &v) in self.indices.iter().zip(&self.values) {
            sums[j] += v;
        }
        sums
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut dense = Array2::zeros((self.nrows, self.ncols));
        for (i, j, v) in self.iter() {
            dense[[i, j]] = v;
        }
        dense
    }

    pub fn from_dense(dense: &Array2<f64>) -> CsrMatrix {
        let (nrows, ncols) = dense.dim();
        CsrMatrix::from_triplets(
            nrows,
            ncols,
            dense.indexed_iter().filter(|(_, &v)| v != 0.0).map(|((i, j), &v)| (i, j, v)),
        )
    }
}

/// Symmetric sparse matrix stored as its upper triangle plus diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    upper: CsrMatrix,
}

impl SymmetricSparseMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricSparseMatrix { upper: CsrMatrix::zeros(n, n) }
    }

    /// Builds from entries given once per unordered pair, in either
    /// orientation. Repeated pairs are summed. Values must be finite and
    /// non-negative.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::VertexOutOfRange { id: i.max(j), n });
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "entry ({i}, {j}) = {v} is not a finite non-negative value"
                )));
            }
            entries.push((i.min(j), i.max(j), v));
        }
        Ok(SymmetricSparseMatrix { upper: CsrMatrix::from_triplets(n, n, entries) })
    }

    /// Takes the upper triangle (diagonal included) of a matrix that is
    /// already symmetric; the lower triangle is ignored. Explicit zeros are
    /// dropped.
    pub fn from_upper_of(full: &CsrMatrix) -> Self {
        assert_eq!(full.nrows(), full.ncols());
        SymmetricSparseMatrix { upper: full.filter(|i, j, v| j >= i && v != 0.0) }
    }

    pub(crate) fn from_upper_csr(upper: CsrMatrix) -> Self {
        debug_assert!(upper.iter().all(|(i, j, _)| j >= i));
        SymmetricSparseMatrix { upper }
    }

    pub fn from_dense(dense: &Array2<f64>) -> Result<Self> {
        let n = dense.nrows();
        if dense.ncols() != n {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if dense[[i, j]] != dense[[j, i]] {
                    return Err(Error::InvalidParameter(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Self::from_triplets(
            n,
            dense.indexed_iter().filter(|((i, j), &v)| j >= i && v != 0.0).map(|((i, j), &v)| (i, j, v)),
        )
    }

    pub fn n(&self) -> usize {
        self.upper.nrows()
    }

    /// Number of stored entries (upper triangle and diagonal).
    pub fn nnz_stored(&self) -> usize {
        self.upper.nnz()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper.get(i.min(j), i.max(j))
    }

    /// Stored entries `(i, j, v)` with `i <= j`, row-major.
    pub fn iter_upper(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.upper.iter()
    }

    pub fn upper(&self) -> &CsrMatrix {
        &self.upper
    }

    /// Expands to a general CSR matrix holding both triangles.
    pub fn to_full(&self) -> CsrMatrix {
        let n = self.n();
        let mut counts = vec![0usize; n + 1];
        for (i, j, _) in self.upper.iter() {
            counts[i + 1] += 1;
            if i != j {
                counts[j + 1] += 1;
            }
        }
        for r in 0..n {
            counts[r + 1] += counts[r];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0usize; indptr[n]];
        let mut values = vec![0.0; indptr[n]];
        // Lower-triangle entries of row j come from earlier rows i < j, so
        // visiting rows in order keeps every output row sorted.
        for i in 0..n {
            let (cols, vals) = self.upper.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if i != j {
                    let dst = next[j];
                    indices[dst] = i;
                    values[dst] = v;
                    next[j] += 1;
                }
            }
            for (&j, &v) in cols.iter().zip(vals) {
                let dst = next[i];
                indices[dst] = j;
                values[dst] = v;
                next[i] += 1;
            }
        }
        CsrMatrix::from_parts(n, n, indptr, indices, values)
    }

    /// Weighted degrees (full row sums).
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n()];
        for (i, j, v) in self.upper.iter() {
            deg[i] += v;
            if i != j {
                deg[j] += v;
            }
        }
        deg
    }

    pub fn scaled(&self, c: f64) -> SymmetricSparseMatrix {
        SymmetricSparseMatrix { upper: self.upper.map_values(|v| c * v) }
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.n();
        let mut dense = Array2::zeros((n, n));
        for (i, j, v) in self.upper.iter() {
            dense[[i, j]] = v;
            dense[[j, i]] = v;
        }
        dense
    }

    /// Largest absolute entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &SymmetricSparseMatrix) -> f64 {
        assert_eq!(self.n(), other.n());
        self.upper.add_scaled(&other.upper, -1.0).values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Entry-wise sum; both operands must have the same dimension.
    pub fn add(&self, other: &SymmetricSparseMatrix) -> SymmetricSparseMatrix {
        SymmetricSparseMatrix { upper: self.upper.add_scaled(&other.upper, 1.0) }
    }
}
