use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, SymmetricSparseMatrix};

/// Component label per vertex; components are numbered in order of their
/// smallest vertex. Edges are the positive off-diagonal entries of `m`.
pub fn connected_components(m: &SymmetricSparseMatrix) -> Vec<usize> {
    let full = m.to_full();
    let n = m.n();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let (cols, vals) = full.row(v);
            for (&u, &w) in cols.iter().zip(vals) {
                if w > 0.0 && label[u] == usize::MAX {
                    label[u] = next;
                    queue.push_back(u);
                }
            }
        }
        next += 1;
    }
    label
}

/// Sorted vertex ids of a largest connected component. Among equally large
/// components the one containing the smallest vertex id wins.
pub fn largest_component(m: &SymmetricSparseMatrix) -> Vec<usize> {
    let labels = connected_components(m);
    let count = labels.iter().max().map_or(0, |&l| l + 1);
    let mut sizes = vec![0usize; count];
    for &l in &labels {
        sizes[l] += 1;
    }
    // Labels follow smallest-vertex order, so the first maximum is the tie winner.
    let Some(best) = (0..count).max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a))) else {
        return Vec::new();
    };
    labels.iter().enumerate().filter(|&(_, &l)| l == best).map(|(v, _)| v).collect()
}

/// Principal submatrix on `ids` (strictly increasing), reindexed to
/// `0..ids.len()`.
pub fn restrict(m: &SymmetricSparseMatrix, ids: &[usize]) -> Result<SymmetricSparseMatrix> {
    let n = m.n();
    if ids.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnsortedIds);
    }
    if let Some(&bad) = ids.iter().find(|&&id| id >= n) {
        return Err(Error::VertexOutOfRange { id: bad, n });
    }
    let mut new_index = vec![usize::MAX; n];
    for (k, &id) in ids.iter().enumerate() {
        new_index[id] = k;
    }
    let upper = m.upper();
    let mut indptr = Vec::with_capacity(ids.len() + 1);
    indptr.push(0);
    let mut indices = Vec::new();
    let mut values = Vec::new();
    for &id in ids {
        let (cols, vals) = upper.row(id);
        // `ids` is increasing, so relabeled columns stay sorted.
        for (&c, &v) in cols.iter().zip(vals) {
            if new_index[c] != usize::MAX {
                indices.push(new_index[c]);
                values.push(v);
            }
        }
        indptr.push(indices.len());
    }
    Ok(SymmetricSparseMatrix::from_upper_csr(CsrMatrix::from_parts(
        ids.len(),
        ids.len(),
        indptr,
        indices,
        values,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(n: usize, entries: &[(usize, usize, f64)]) -> SymmetricSparseMatrix {
        SymmetricSparseMatrix::from_triplets(n, entries.iter().copied()).unwrap()
    }

    #[test]
    fn picks_larger_block() {
        let m = sym(
            5,
            &[(0, 3, 1.0), (3, 4, 1.0), (1, 2, 1.0)], // {0,3,4} and {1,2}
        );
        assert_eq!(largest_component(&m), vec![0, 3, 4]);
    }

    #[test]
    fn dense_matrix_is_one_component() {
        let entries: Vec<_> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0))).collect();
        assert_eq!(largest_component(&sym(4, &entries)), vec![0, 1, 2, 3]);
    }

    #[test]
    fn tie_goes_to_smallest_vertex() {
        let m = sym(4, &[(1, 3, 1.0), (0, 2, 1.0)]);
        assert_eq!(largest_component(&m), vec![0, 2]);
        let m = sym(5, &[(3, 4, 1.0), (1, 2, 1.0)]);
        // vertex 0 is isolated; both 2-blocks tie, {1,2} holds the smaller id
        assert_eq!(largest_component(&m), vec![1, 2]);
    }

    #[test]
    fn empty_and_isolated() {
        assert!(largest_component(&SymmetricSparseMatrix::zeros(0)).is_empty());
        assert_eq!(largest_component(&SymmetricSparseMatrix::zeros(3)), vec![0]);
    }

    #[test]
    fn restrict_examples() {
        let eye = sym(4, &[(0, 0, 1.0), (1, 1, 2.0), (2, 2, 3.0), (3, 3, 4.0)]);
        let r = restrict(&eye, &[1, 3]).unwrap();
        assert_eq!(r.n(), 2);
        assert_eq!(r.get(0, 0), 2.0);
        assert_eq!(r.get(1, 1), 4.0);
        assert_eq!(r.get(0, 1), 0.0);

        assert_eq!(restrict(&eye, &[0, 1, 2, 3]).unwrap(), eye);

        let m = sym(3, &[(0, 2, 5.0)]);
        let r = restrict(&m, &[0, 2]).unwrap();
        assert_eq!(r.get(0, 1), 5.0);
        assert_eq!(r.get(1, 0), 5.0);
    }

    #[test]
    fn restrict_rejects_bad_ids() {
        let m = SymmetricSparseMatrix::zeros(3);
        assert!(matches!(restrict(&m, &[0, 3]), Err(Error::VertexOutOfRange { id: 3, .. })));
        assert!(matches!(restrict(&m, &[2, 1]), Err(Error::UnsortedIds)));
    }

    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }

    fn arb_sym() -> impl Strategy<Value = SymmetricSparseMatrix> {
        (1usize..14).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, 0.1f64..5.0), 0..(2 * n)).prop_map(move |e| {
                SymmetricSparseMatrix::from_triplets(n, e.into_iter().filter(|(i, j, _)| i != j)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn largest_component_agrees_with_union_find(m in arb_sym()) {
            let n = m.n();
            let mut parent: Vec<usize> = (0..n).collect();
            for (i, j, _) in m.iter_upper() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
            let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
            let mut size = vec![0usize; n];
            for &r in &roots { size[r] += 1; }
            let best = *size.iter().max().unwrap();

            let comp = largest_component(&m);
            prop_assert_eq!(comp.len(), best);
            let root = roots[comp[0]];
            prop_assert!(comp.iter().all(|&v| roots[v] == root));
            // smallest-id tie break: no equally large component has a smaller member
            let first_of_best = (0..n).find(|&v| size[roots[v]] == best).unwrap();
            prop_assert_eq!(comp[0], first_of_best);
        }

        #[test]
        fn restriction_composes(m in arb_sym(), mask_a in proptest::collection::vec(any::<bool>(), 14), mask_b in proptest::collection::vec(any::<bool>(), 14)) {
            let a: Vec<usize> = (0..m.n()).filter(|&v| mask_a[v]).collect();
            let b: Vec<usize> = (0..a.len()).filter(|&v| mask_b[v]).collect();
            let ab: Vec<usize> = b.iter().map(|&k| a[k]).collect();
            let twice = restrict(&restrict(&m, &a).unwrap(), &b).unwrap();
            prop_assert_eq!(twice, restrict(&m, &ab).unwrap());
        }
    }
}
