//! Dense `n x n` evaluation of MAM formulae.

use std::collections::HashMap;
use std::ops::AddAssign;

use ndarray::linalg::general_mat_mul;
use ndarray::{Array2, ArrayView2, Zip};

use super::formula::{Base, Factor, Formula, Term};
use crate::graph::GraphMatrices;
use crate::sparse::{CsrMatrix, SymmetricSparseMatrix};

/// Operation counts of one dense evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpStats {
    pub matmuls: usize,
    pub hadamards: usize,
    pub additions: usize,
}

impl AddAssign for OpStats {
    fn add_assign(&mut self, rhs: OpStats) {
        self.matmuls += rhs.matmuls;
        self.hadamards += rhs.hadamards;
        self.additions += rhs.additions;
    }
}

struct DenseBases<'a> {
    mats: &'a GraphMatrices,
    cache: HashMap<Base, Array2<f64>>,
}

impl<'a> DenseBases<'a> {
    fn ensure(&mut self, base: Base) {
        if self.cache.contains_key(&base) {
            return;
        }
        let n = self.mats.n();
        let dense = match base {
            Base::J => self.mats.j.to_dense(),
            Base::Js => self.mats.js.to_dense(),
            Base::Jd => self.mats.jd.to_dense(),
            Base::G => self.mats.g.to_dense(),
            Base::Gs => self.mats.gs.to_dense(),
            Base::Gd => self.mats.gd.to_dense(),
            Base::Jn => Array2::from_shape_fn((n, n), |(i, j)| f64::from(u8::from(i != j))),
            Base::J0 => {
                let mut out = Array2::from_shape_fn((n, n), |(i, j)| f64::from(u8::from(i != j)));
                for (i, j, _) in self.mats.undirected_support().iter() {
                    out[[i, j]] = 0.0;
                }
                out
            }
        };
        self.cache.insert(base, dense);
    }

    fn view(&self, f: Factor) -> ArrayView2<'_, f64> {
        let v = self.cache[&f.base].view();
        if f.transposed {
            v.reversed_axes()
        } else {
            v
        }
    }
}

/// Accumulates `A` so that the result is `scale * (A + A^T)`: C-terms enter
/// with weight one when their transpose is part of the formula (and one half
/// otherwise), C'-terms with one half.
pub(super) fn evaluate(mats: &GraphMatrices, formula: &Formula) -> (SymmetricSparseMatrix, OpStats) {
    let n = mats.n();
    let mut stats = OpStats::default();
    let mut bases = DenseBases { mats, cache: HashMap::new() };
    for term in formula.terms() {
        for f in term.factors() {
            bases.ensure(f.base);
        }
    }

    let mut acc = Array2::<f64>::zeros((n, n));
    let mut prod = Array2::<f64>::zeros((0, 0));
    let c_weight = if formula.add_c_transpose { 1.0 } else { 0.5 };
    let weighted = formula.c.iter().map(|t| (t, c_weight)).chain(formula.c_prime.iter().map(|t| (t, 0.5)));
    for (term, coef) in weighted {
        match *term {
            Term::Pair(h) => {
                acc.scaled_add(coef, &bases.view(h));
            }
            Term::Path { h, l, r } => {
                if prod.dim() != (n, n) {
                    prod = Array2::zeros((n, n));
                }
                general_mat_mul(1.0, &bases.view(l), &bases.view(r), 0.0, &mut prod);
                stats.matmuls += 1;
                Zip::from(&mut acc)
                    .and(&bases.view(h))
                    .and(&prod)
                    .for_each(|a, &hv, &pv| *a += coef * hv * pv);
                stats.hadamards += 1;
            }
        }
        stats.additions += 1;
    }
    drop(prod);
    bases.cache.clear();
    // The final A + A^T.
    stats.additions += 1;

    let scale = formula.scale;
    let mut indptr = Vec::with_capacity(n + 1);
    indptr.push(0);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = scale * (acc[[i, j]] + acc[[j, i]]);
            if v != 0.0 {
                indices.push(j);
                values.push(v);
            }
        }
        indptr.push(indices.len());
    }
    let upper = CsrMatrix::from_parts(n, n, indptr, indices, values);
    (SymmetricSparseMatrix::from_upper_of(&upper), stats)
}
