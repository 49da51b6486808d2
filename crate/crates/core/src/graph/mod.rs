//! Weighted directed graphs and their indicator / adjacency matrices.

mod components;
mod io;

pub use components::{connected_components, largest_component, restrict};
pub use io::{load_edge_list, parse_edge_list, write_edge_list, write_id_mapping, LoadOptions};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// A weighted directed edge between internal vertex ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(source: usize, target: usize, weight: f64) -> Self {
        Edge { source, target, weight }
    }
}

/// Simple weighted directed graph on vertices `0..n`.
///
/// Edges are kept sorted by `(source, target)`. There are no self-loops, no
/// repeated ordered pairs, and every weight is finite and strictly positive.
/// Each vertex also carries an external id (the id used in input files);
/// graphs built in memory use the identity mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<Edge>,
    external_ids: Vec<u64>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let external_ids = (0..n as u64).collect();
        Self::with_external_ids(n, edges, external_ids)
    }

    /// Like [`DirectedGraph::new`] with all weights set to one.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, pairs.into_iter().map(|(s, t)| Edge::new(s, t, 1.0)))
    }

    pub fn with_external_ids(
        n: usize,
        edges: impl IntoIterator<Item = Edge>,
        external_ids: Vec<u64>,
    ) -> Result<Self> {
        if external_ids.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} external ids for {n} vertices",
                external_ids.len()
            )));
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            for id in [e.source, e.target] {
                if id >= n {
                    return Err(Error::VertexOutOfRange { id, n });
                }
            }
            if e.source == e.target {
                return Err(Error::SelfLoop(external_ids[e.source]));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidWeight {
                    source_id: external_ids[e.source],
                    target_id: external_ids[e.target],
                    weight: e.weight,
                });
            }
        }
        edges.sort_by_key(|e| (e.source, e.target));
        if let Some(w) = edges.windows(2).find(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target)) {
            return Err(Error::DuplicateEdge {
                source_id: external_ids[w[0].source],
                target_id: external_ids[w[0].target],
            });
        }
        Ok(DirectedGraph { n, edges, external_ids })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    pub fn external_id(&self, v: usize) -> u64 {
        self.external_ids[v]
    }

    /// Edge density `|E| / n^2`.
    pub fn density(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.edges.len() as f64 / (self.n as f64 * self.n as f64)
        }
    }

    /// Copy of the graph with every weight replaced by one.
    pub fn unit_weights(&self) -> DirectedGraph {
        DirectedGraph {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge::new(e.source, e.target, 1.0)).collect(),
            external_ids: self.external_ids.clone(),
        }
    }

    /// Weighted adjacency matrix `G`.
    pub fn adjacency(&self) -> CsrMatrix {
        CsrMatrix::from_triplets(self.n, self.n, self.edges.iter().map(|e| (e.source, e.target, e.weight)))
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.source] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.target] += 1;
        }
        deg
    }
}

/// The six materialized indicator and adjacency matrices of a graph.
///
/// `J0` and `Jn` are never stored: `Jn = 1 - I` and
/// `J0 = 1 - (I + Js + Js^T + Jd)`.
#[derive(Debug, Clone)]
pub struct GraphMatrices {
    /// Directed indicator.
    pub j: CsrMatrix,
    /// Single (unreciprocated) edge indicator.
    pub js: CsrMatrix,
    /// Double (reciprocated) edge indicator, symmetric.
    pub jd: CsrMatrix,
    /// Weighted adjacency.
    pub g: CsrMatrix,
    /// Weighted single-edge adjacency.
    pub gs: CsrMatrix,
    /// Double-edge adjacency holding the two-direction weight sum, symmetric.
    pub gd: CsrMatrix,
}

impl GraphMatrices {
    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    /// Symmetric indicator of pairs joined by an edge in either direction,
    /// `Js + Js^T + Jd`.
    pub fn undirected_support(&self) -> CsrMatrix {
        self.j.add_scaled(&self.j.transpose(), 1.0).map_values(|_| 1.0)
    }
}

pub fn build_matrices(g: &DirectedGraph) -> GraphMatrices {
    let n = g.n();
    let adj = g.adjacency();
    let adj_t = adj.transpose();

    let mut j = Vec::with_capacity(g.edge_count());
    let mut js = Vec::new();
    let mut jd = Vec::new();
    let mut gs = Vec::new();
    let mut gd = Vec::new();
    for e in g.edges() {
        let (s, t, w) = (e.source, e.target, e.weight);
        j.push((s, t, 1.0));
        let reverse = adj_t.get(s, t);
        if reverse > 0.0 {
            jd.push((s, t, 1.0));
            gd.push((s, t, w + reverse));
        } else {
            js.push((s, t, 1.0));
            gs.push((s, t, w));
        }
    }
    GraphMatrices {
        j: CsrMatrix::from_triplets(n, n, j),
        js: CsrMatrix::from_triplets(n, n, js),
        jd: CsrMatrix::from_triplets(n, n, jd),
        g: adj,
        gs: CsrMatrix::from_triplets(n, n, gs),
        gd: CsrMatrix::from_triplets(n, n, gd),
    }
}
