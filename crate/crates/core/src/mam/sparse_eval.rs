//! Sparse evaluation of MAM formulae.
//!
//! `Jn = 1 - I` and `J0 = 1 - I - S` (with `S` the undirected edge support)
//! are never stored. A product with one of them is a sum over the other
//! factor's nonzeros that skips the excluded indices, so no dense vector of
//! row sums is formed and nothing is subtracted.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::formula::{Base, Factor, Formula, Term};
use crate::graph::GraphMatrices;
use crate::sparse::{CsrMatrix, SymmetricSparseMatrix};

const ROW_CHUNK: usize = 256;

struct SparseBases<'a> {
    mats: &'a GraphMatrices,
    support: OnceLock<CsrMatrix>,
    /// Transposes of J, Js, G, Gs.
    transposes: [OnceLock<CsrMatrix>; 4],
}

impl<'a> SparseBases<'a> {
    fn new(mats: &'a GraphMatrices) -> Self {
        SparseBases { mats, support: OnceLock::new(), transposes: Default::default() }
    }

    fn n(&self) -> usize {
        self.mats.n()
    }

    fn base(&self, base: Base) -> &CsrMatrix {
        match base {
            Base::J => &self.mats.j,
            Base::Js => &self.mats.js,
            Base::Jd => &self.mats.jd,
            Base::G => &self.mats.g,
            Base::Gs => &self.mats.gs,
            Base::Gd => &self.mats.gd,
            Base::Jn | Base::J0 => unreachable!("implicit matrices have no storage"),
        }
    }

    fn transposed(&self, base: Base) -> &CsrMatrix {
        let slot = match base {
            Base::J => 0,
            Base::Js => 1,
            Base::G => 2,
            Base::Gs => 3,
            symmetric => return self.base(symmetric),
        };
        self.transposes[slot].get_or_init(|| self.base(base).transpose())
    }

    /// Matrix whose row `i` is row `i` of the factor.
    fn rows(&self, f: Factor) -> &CsrMatrix {
        if f.transposed {
            self.transposed(f.base)
        } else {
            self.base(f.base)
        }
    }

    /// Matrix whose row `j` is column `j` of the factor.
    fn cols(&self, f: Factor) -> &CsrMatrix {
        if f.transposed {
            self.base(f.base)
        } else {
            self.transposed(f.base)
        }
    }

    /// Sorted indices an implicit factor zeroes in row `i`, besides `i` itself.
    fn excluded(&self, base: Base, i: usize) -> &[usize] {
        match base {
            Base::Jn => &[],
            Base::J0 => self.support.get_or_init(|| self.mats.undirected_support()).row(i).0,
            _ => unreachable!("only implicit factors exclude indices"),
        }
    }
}

/// `sum_k a(k) b(k)` over two sorted sparse vectors.
fn sparse_dot(ac: &[usize], av: &[f64], bc: &[usize], bv: &[f64]) -> f64 {
    let (mut p, mut q) = (0, 0);
    let mut sum = 0.0;
    while p < ac.len() && q < bc.len() {
        match ac[p].cmp(&bc[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                sum += av[p] * bv[q];
                p += 1;
                q += 1;
            }
        }
    }
    sum
}

/// Sum of `vals[k]` over `k` not equal to `skip` and not in sorted `excl`.
fn sum_excluding(cols: &[usize], vals: &[f64], skip: usize, excl: &[usize]) -> f64 {
    let mut e = 0;
    let mut sum = 0.0;
    for (&k, &v) in cols.iter().zip(vals) {
        while e < excl.len() && excl[e] < k {
            e += 1;
        }
        if k != skip && !(e < excl.len() && excl[e] == k) {
            sum += v;
        }
    }
    sum
}

/// Number of indices in `0..n` outside `{i, j}` and both sorted lists.
fn count_outside(n: usize, i: usize, j: usize, a: &[usize], b: &[usize]) -> f64 {
    let (mut p, mut q) = (0, 0);
    let mut union = 0usize;
    let hits_ij = |k: usize| usize::from(k == i || k == j);
    let mut covered_ij = 0;
    while p < a.len() || q < b.len() {
        let k = match (a.get(p), b.get(q)) {
            (Some(&x), Some(&y)) if x == y => {
                p += 1;
                q += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                p += 1;
                x
            }
            (Some(&x), None) => {
                p += 1;
                x
            }
            (_, Some(&y)) => {
                q += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        union += 1;
        covered_ij += hits_ij(k);
    }
    let special = if i == j { 1 } else { 2 };
    (n - (union - covered_ij) - special) as f64
}

struct RowBlock {
    counts: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

/// Builds an `n x n` CSR matrix row by row in parallel chunks. Each row is
/// computed independently, so the result does not depend on scheduling.
fn build_rows<F>(n: usize, row_fn: F) -> CsrMatrix
where
    F: Fn(usize, &mut Workspace, &mut Vec<usize>, &mut Vec<f64>) + Sync,
{
    let starts: Vec<usize> = (0..n).step_by(ROW_CHUNK).collect();
    let blocks: Vec<RowBlock> = starts
        .par_iter()
        .map(|&start| {
            let mut ws = Workspace::default();
            let mut block =
                RowBlock { counts: Vec::with_capacity(ROW_CHUNK), indices: Vec::new(), values: Vec::new() };
            for i in start..(start + ROW_CHUNK).min(n) {
                let before = block.indices.len();
                row_fn(i, &mut ws, &mut block.indices, &mut block.values);
                block.counts.push(block.indices.len() - before);
            }
            block
        })
        .collect();

    let mut indptr = Vec::with_capacity(n + 1);
    indptr.push(0);
    let total: usize = blocks.iter().map(|b| b.indices.len()).sum();
    let mut indices = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    for b in blocks {
        for c in b.counts {
            indptr.push(indptr.last().unwrap() + c);
        }
        indices.extend(b.indices);
        values.extend(b.values);
    }
    CsrMatrix::from_parts(n, n, indptr, indices, values)
}

/// Dense scatter accumulator for row-wise sparse products.
#[derive(Default)]
struct Workspace {
    acc: Vec<f64>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

fn evaluate_term(b: &SparseBases<'_>, term: Term) -> CsrMatrix {
    let n = b.n();
    match term {
        Term::Pair(h) => {
            assert!(!h.base.is_implicit(), "dense pair term");
            b.rows(h).clone()
        }
        Term::Path { h, l, r } if !h.base.is_implicit() => {
            let hm = b.rows(h);
            build_rows(n, |i, _, idx, val| {
                let (hc, hv) = hm.row(i);
                for (&j, &hval) in hc.iter().zip(hv) {
                    let s = match (l.base.is_implicit(), r.base.is_implicit()) {
                        (false, false) => {
                            let (lc, lv) = b.rows(l).row(i);
                            let (rc, rv) = b.cols(r).row(j);
                            sparse_dot(lc, lv, rc, rv)
                        }
                        (true, false) => {
                            let (rc, rv) = b.cols(r).row(j);
                            sum_excluding(rc, rv, i, b.excluded(l.base, i))
                        }
                        (false, true) => {
                            let (lc, lv) = b.rows(l).row(i);
                            sum_excluding(lc, lv, j, b.excluded(r.base, j))
                        }
                        (true, true) => count_outside(n, i, j, b.excluded(l.base, i), b.excluded(r.base, j)),
                    };
                    let v = hval * s;
                    if v != 0.0 {
                        idx.push(j);
                        val.push(v);
                    }
                }
            })
        }
        Term::Path { h, l, r } => {
            assert!(!l.base.is_implicit() && !r.base.is_implicit(), "term with two implicit factors");
            let (lm, rm) = (b.rows(l), b.rows(r));
            build_rows(n, |i, ws, idx, val| {
                if ws.acc.len() != n {
                    ws.acc = vec![0.0; n];
                    ws.mark = vec![false; n];
                }
                let (lc, lv) = lm.row(i);
                for (&k, &lval) in lc.iter().zip(lv) {
                    let (rc, rv) = rm.row(k);
                    for (&j, &rval) in rc.iter().zip(rv) {
                        if !ws.mark[j] {
                            ws.mark[j] = true;
                            ws.touched.push(j);
                        }
                        ws.acc[j] += lval * rval;
                    }
                }
                ws.touched.sort_unstable();
                let excl = b.excluded(h.base, i);
                let mut e = 0;
                for &j in &ws.touched {
                    while e < excl.len() && excl[e] < j {
                        e += 1;
                    }
                    let dropped = j == i || (e < excl.len() && excl[e] == j);
                    let v = ws.acc[j];
                    if !dropped && v != 0.0 {
                        idx.push(j);
                        val.push(v);
                    }
                    ws.acc[j] = 0.0;
                    ws.mark[j] = false;
                }
                ws.touched.clear();
            })
        }
    }
}

/// Evaluates `scale * (C [+ C^T] + C')` via `A = C + C'/2` (or `(C + C')/2`
/// when `C` is symmetric on its own) and returns `scale * (A + A^T)`.
pub(super) fn evaluate(mats: &GraphMatrices, formula: &Formula) -> SymmetricSparseMatrix {
    let n = mats.n();
    let b = SparseBases::new(mats);
    let c_weight = if formula.add_c_transpose { 1.0 } else { 0.5 };
    let weighted: Vec<(Term, f64)> =
        formula.c.iter().map(|&t| (t, c_weight)).chain(formula.c_prime.iter().map(|&t| (t, 0.5))).collect();
    let evaluated: Vec<CsrMatrix> = weighted.par_iter().map(|&(t, _)| evaluate_term(&b, t)).collect();

    let mut acc = CsrMatrix::zeros(n, n);
    for (m, &(_, coef)) in evaluated.iter().zip(&weighted) {
        acc = acc.add_scaled(m, coef);
    }
    let sym = acc.add_scaled(&acc.transpose(), 1.0);
    let scale = formula.scale;
    SymmetricSparseMatrix::from_upper_of(&sym.filter(|i, j, v| j > i && v != 0.0).map_values(|v| scale * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exclusion_sum_skips_listed_indices() {
        let cols = [0, 2, 3, 5, 7];
        let vals = [1.0, 2.0, 4.0, 8.0, 16.0];
        assert_eq!(sum_excluding(&cols, &vals, 3, &[]), 27.0);
        assert_eq!(sum_excluding(&cols, &vals, 3, &[1, 5, 6]), 19.0);
        assert_eq!(sum_excluding(&cols, &vals, 9, &[0, 7]), 14.0);
    }

    #[test]
    fn count_outside_handles_overlap() {
        // n = 10, {i, j} = {0, 1}, lists cover {1, 2, 3, 4}
        assert_eq!(count_outside(10, 0, 1, &[1, 2, 3], &[2, 4]), 5.0);
        assert_eq!(count_outside(4, 0, 1, &[], &[]), 2.0);
    }

    #[test]
    fn dot_of_disjoint_supports_is_zero() {
        assert_eq!(sparse_dot(&[0, 2], &[1.0, 1.0], &[1, 3], &[1.0, 1.0]), 0.0);
        assert_eq!(sparse_dot(&[0, 2], &[2.0, 3.0], &[2], &[5.0]), 15.0);
    }
}
