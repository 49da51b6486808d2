//! Collider and expander MAMs of bipartite graphs.

use super::{build_mam, Closure, MamSpec, MotifName, Weighting};
use crate::error::{Error, Result};
use crate::graph::{restrict, DirectedGraph};
use crate::sparse::SymmetricSparseMatrix;

/// One-mode similarity matrices of a bipartite graph.
#[derive(Debug, Clone)]
pub struct BipartiteMams {
    /// Sorted source vertex ids; row `r` of `collider` is `sources[r]`.
    pub sources: Vec<usize>,
    /// Sorted destination vertex ids; row `r` of `expander` is
    /// `destinations[r]`.
    pub destinations: Vec<usize>,
    pub collider: SymmetricSparseMatrix,
    pub expander: SymmetricSparseMatrix,
}

/// Checks that every edge runs from `sources` to `destinations` and returns
/// both sets sorted and deduplicated.
pub fn validate_bipartite(
    g: &DirectedGraph,
    sources: &[usize],
    destinations: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    // 0 = neither, 1 = source, 2 = destination
    let mut side = vec![0u8; n];
    for (set, tag) in [(sources, 1u8), (destinations, 2u8)] {
        for &v in set {
            if v >= n {
                return Err(Error::VertexOutOfRange { id: v, n });
            }
            if side[v] != 0 && side[v] != tag {
                return Err(Error::InvalidParameter(format!(
                    "vertex {} is both a source and a destination",
                    g.external_id(v)
                )));
            }
            side[v] = tag;
        }
    }
    for e in g.edges() {
        let reason = match (side[e.source], side[e.target]) {
            (1, 2) => continue,
            (1, 1) => "joins two sources",
            (2, 2) => "joins two destinations",
            (2, 1) => "runs from a destination to a source",
            _ => "touches a vertex in neither set",
        };
        return Err(Error::NotBipartite {
            source_id: g.external_id(e.source),
            target_id: g.external_id(e.target),
            reason,
        });
    }
    let pick = |tag| (0..n).filter(|&v| side[v] == tag).collect();
    Ok((pick(1), pick(2)))
}

/// Splits vertices into sources (out-edges and no in-edges) and all others.
pub fn infer_sources(g: &DirectedGraph) -> (Vec<usize>, Vec<usize>) {
    let (out_deg, in_deg) = (g.out_degrees(), g.in_degrees());
    (0..g.n()).partition(|&v| out_deg[v] > 0 && in_deg[v] == 0)
}

/// Collider MAM restricted to the sources and expander MAM restricted to the
/// destinations. On bipartite input functional and structural instances
/// coincide, so the functional closure is used.
pub fn bipartite_mams(
    g: &DirectedGraph,
    sources: &[usize],
    destinations: &[usize],
    weighting: Weighting,
) -> Result<BipartiteMams> {
    let (sources, destinations) = validate_bipartite(g, sources, destinations)?;
    let mam = |motif| build_mam(g, &MamSpec::single(motif, Closure::Functional, weighting));
    let collider = restrict(&mam(MotifName::Coll)?, &sources)?;
    let expander = restrict(&mam(MotifName::Expa)?, &destinations)?;
    Ok(BipartiteMams { sources, destinations, collider, expander })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn collider_mean_is_average_of_shared_edges() {
        let g = DirectedGraph::new(3, [Edge::new(0, 2, 2.0), Edge::new(1, 2, 4.0)]).unwrap();
        let b = bipartite_mams(&g, &[0, 1], &[2], Weighting::Mean).unwrap();
        assert_eq!(b.collider.get(0, 1), 3.0);
        assert_eq!(b.expander.n(), 1);
        assert_eq!(b.expander.nnz_stored(), 0);
    }

    #[test]
    fn expander_mean() {
        let g = DirectedGraph::new(3, [Edge::new(0, 1, 3.0), Edge::new(0, 2, 5.0)]).unwrap();
        let b = bipartite_mams(&g, &[0], &[1, 2], Weighting::Mean).unwrap();
        assert_eq!(b.expander.get(0, 1), 4.0);
    }

    #[test]
    fn rejects_non_bipartite_edges() {
        let g = DirectedGraph::from_pairs(3, [(0, 2), (2, 1)]).unwrap();
        match validate_bipartite(&g, &[0, 1], &[2]) {
            Err(Error::NotBipartite { source_id: 2, target_id: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let g = DirectedGraph::from_pairs(3, [(0, 1)]).unwrap();
        assert!(matches!(validate_bipartite(&g, &[0, 1], &[2]), Err(Error::NotBipartite { .. })));
        assert!(matches!(validate_bipartite(&g, &[0], &[0, 1]), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn inferred_sources() {
        let g = DirectedGraph::from_pairs(5, [(0, 2), (1, 2), (1, 3)]).unwrap();
        assert_eq!(infer_sources(&g), (vec![0, 1], vec![2, 3, 4]));
    }
}
