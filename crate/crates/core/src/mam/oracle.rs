//! Reference MAMs by direct instance enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::motif::permutations;
use super::{Closure, MamSpec, Weighting};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::sparse::SymmetricSparseMatrix;

type EdgeSet = Vec<(usize, usize)>;

/// Largest graph [`brute_force_mam`] accepts.
pub const DEFAULT_ORACLE_BOUND: usize = 12;

pub fn brute_force_mam(g: &DirectedGraph, spec: &MamSpec) -> Result<SymmetricSparseMatrix> {
    brute_force_mam_bounded(g, spec, DEFAULT_ORACLE_BOUND)
}

/// Enumerates every injective map of the motif into `g`, keeps those meeting
/// the closure condition, merges maps with the same image edge set into one
/// instance, and adds the instance weight to each of its anchored pairs.
pub fn brute_force_mam_bounded(
    g: &DirectedGraph,
    spec: &MamSpec,
    bound: usize,
) -> Result<SymmetricSparseMatrix> {
    let n = g.n();
    if n > bound {
        return Err(Error::OracleBound { n, bound });
    }
    let [name] = spec.motifs() else {
        return Err(Error::InvalidSpec("the brute-force oracle takes a single motif".into()));
    };
    let motif = name.motif();
    let m = motif.m;
    let weight: HashMap<(usize, usize), f64> =
        g.edges().iter().map(|e| ((e.source, e.target), e.weight)).collect();
    let has = |a: usize, b: usize| weight.contains_key(&(a, b));

    // instance edge set -> anchored pairs
    let mut instances: BTreeMap<EdgeSet, BTreeSet<(usize, usize)>> = BTreeMap::new();
    let mut phi = vec![0usize; m];
    for tuple in injective_tuples(n, m) {
        phi.copy_from_slice(&tuple);
        let ok = (0..m).all(|u| {
            (0..m).all(|v| {
                if u == v {
                    return true;
                }
                let in_motif = motif.has_edge(u, v);
                let in_graph = has(phi[u], phi[v]);
                match spec.closure {
                    Closure::Functional => !in_motif || in_graph,
                    Closure::Structural => in_motif == in_graph,
                }
            })
        });
        if !ok {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = motif.edges.iter().map(|&(u, v)| (phi[u], phi[v])).collect();
        edges.sort_unstable();
        let pairs = instances.entry(edges).or_default();
        for (x, &a) in motif.anchors.iter().enumerate() {
            for &b in &motif.anchors[x + 1..] {
                let (p, q) = (phi[a], phi[b]);
                pairs.insert((p.min(q), p.max(q)));
            }
        }
    }

    let mut triplets = Vec::new();
    for (edges, pairs) in &instances {
        let w = match spec.weighting {
            Weighting::Unweighted => 1.0,
            Weighting::Mean => edges.iter().map(|e| weight[e]).sum::<f64>() / motif.edge_count() as f64,
            Weighting::Product => {
                let mut product = 1.0;
                for &(a, b) in edges {
                    let reverse = edges.binary_search(&(b, a)).is_ok();
                    if !reverse {
                        product *= weight[&(a, b)];
                    } else if a < b {
                        product *= weight[&(a, b)] + weight[&(b, a)];
                    }
                }
                product
            }
        };
        triplets.extend(pairs.iter().map(|&(i, j)| (i, j, w)));
    }
    SymmetricSparseMatrix::from_triplets(n, triplets)
}

fn injective_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..m).collect();
    let perms = permutations(m);
    loop {
        for p in &perms {
            out.push(p.iter().map(|&k| subset[k]).collect());
        }
        // next m-subset of 0..n in lexicographic order
        let Some(pos) = (0..m).rev().find(|&x| subset[x] < n - m + x) else {
            break;
        };
        subset[pos] += 1;
        for x in pos + 1..m {
            subset[x] = subset[x - 1] + 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::mam::MotifName;

    #[test]
    fn tuple_count() {
        assert_eq!(injective_tuples(5, 3).len(), 60);
        assert_eq!(injective_tuples(2, 3).len(), 0);
        assert_eq!(injective_tuples(3, 2).len(), 6);
    }

    #[test]
    fn empty_graph_is_zero() {
        let g = DirectedGraph::new(5, []).unwrap();
        let spec = MamSpec::single(MotifName::M9, Closure::Functional, Weighting::Mean);
        assert_eq!(brute_force_mam(&g, &spec).unwrap().nnz_stored(), 0);
    }

    #[test]
    fn reciprocated_pair() {
        let g = DirectedGraph::new(2, [Edge::new(0, 1, 2.0), Edge::new(1, 0, 5.0)]).unwrap();
        let spec = MamSpec::single(MotifName::Md, Closure::Functional, Weighting::Mean);
        assert_eq!(brute_force_mam(&g, &spec).unwrap().get(0, 1), 3.5);
        // two functional single-edge instances
        let spec = MamSpec::single(MotifName::Ms, Closure::Functional, Weighting::Unweighted);
        assert_eq!(brute_force_mam(&g, &spec).unwrap().get(0, 1), 2.0);
        let spec = MamSpec::single(MotifName::Ms, Closure::Structural, Weighting::Unweighted);
        assert_eq!(brute_force_mam(&g, &spec).unwrap().get(0, 1), 0.0);
    }

    #[test]
    fn chorded_cycle_structural_is_dominated() {
        let g = DirectedGraph::from_pairs(4, [(0, 1), (1, 2), (2, 0), (0, 2), (2, 3)]).unwrap();
        let f =
            brute_force_mam(&g, &MamSpec::single(MotifName::M1, Closure::Functional, Weighting::Unweighted))
                .unwrap();
        let s =
            brute_force_mam(&g, &MamSpec::single(MotifName::M1, Closure::Structural, Weighting::Unweighted))
                .unwrap();
        assert_eq!(f.get(0, 1), 1.0);
        assert_eq!(s.get(0, 1), 0.0);
        for (i, j, v) in s.iter_upper() {
            assert!(v <= f.get(i, j));
        }
    }

    #[test]
    fn bound_is_enforced() {
        let g = DirectedGraph::new(13, []).unwrap();
        let spec = MamSpec::single(MotifName::M1, Closure::Functional, Weighting::Mean);
        assert!(matches!(brute_force_mam(&g, &spec), Err(Error::OracleBound { n: 13, bound: 12 })));
        assert!(brute_force_mam_bounded(&g, &spec, 13).is_ok());
    }
}
