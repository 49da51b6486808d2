//! Motif adjacency matrices.
//!
//! [`build_mam`] evaluates closed-form matrix formulae for every motif on two
//! or three vertices, either with dense `n x n` arithmetic or with sparse
//! kernels that never form the all-ones matrices behind `Jn` and `J0`.
//! [`brute_force_mam`] enumerates motif instances directly and serves as the
//! reference the formulae are tested against.

mod bipartite;
mod dense;
pub mod formula;
mod motif;
mod mtx;
mod oracle;
mod sparse_eval;

pub use bipartite::{bipartite_mams, infer_sources, validate_bipartite, BipartiteMams};
pub use dense::OpStats;
pub use formula::{Base, Factor, Formula, Term};
pub use motif::{Motif, MotifName, PairRelation};
pub use mtx::{read_matrix_market, write_matrix_market};
pub use oracle::{brute_force_mam, brute_force_mam_bounded, DEFAULT_ORACLE_BOUND};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{build_matrices, DirectedGraph};
use crate::sparse::SymmetricSparseMatrix;

/// Functional instances need the motif's edges to be present; structural
/// instances additionally need its non-edges to be absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Closure {
    Functional,
    Structural,
}

/// How an instance's edge weights combine into its contribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weighting {
    /// Every instance counts one.
    Unweighted,
    /// Average weight over the motif's edges.
    Mean,
    /// Product over the instance's vertex pairs; a reciprocated pair
    /// contributes the sum of its two weights.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Dense,
    Sparse,
    /// Sparse when the edge density is below `MamSpec::auto_threshold`.
    Auto,
}

/// Default edge density `|E| / n^2` below which [`Method::Auto`] picks the
/// sparse evaluator.
pub const DEFAULT_AUTO_THRESHOLD: f64 = 0.05;

/// What to build: a sum of MAMs over distinct motifs.
#[derive(Debug, Clone, PartialEq)]
pub struct MamSpec {
    motifs: Vec<MotifName>,
    pub closure: Closure,
    pub weighting: Weighting,
    pub method: Method,
    pub auto_threshold: f64,
}

impl MamSpec {
    pub fn new(motifs: Vec<MotifName>, closure: Closure, weighting: Weighting) -> Result<Self> {
        if motifs.is_empty() {
            return Err(Error::InvalidSpec("motif list is empty".into()));
        }
        for (idx, m) in motifs.iter().enumerate() {
            if motifs[..idx].contains(m) {
                return Err(Error::InvalidSpec(format!("motif {m} listed twice")));
            }
        }
        Ok(MamSpec {
            motifs,
            closure,
            weighting,
            method: Method::Auto,
            auto_threshold: DEFAULT_AUTO_THRESHOLD,
        })
    }

    pub fn single(motif: MotifName, closure: Closure, weighting: Weighting) -> Self {
        MamSpec {
            motifs: vec![motif],
            closure,
            weighting,
            method: Method::Auto,
            auto_threshold: DEFAULT_AUTO_THRESHOLD,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_auto_threshold(mut self, threshold: f64) -> Self {
        self.auto_threshold = threshold;
        self
    }

    pub fn motifs(&self) -> &[MotifName] {
        &self.motifs
    }

    /// The concrete method used for `g`.
    pub fn resolve_method(&self, g: &DirectedGraph) -> Method {
        match self.method {
            Method::Auto if g.density() < self.auto_threshold => Method::Sparse,
            Method::Auto => Method::Dense,
            other => other,
        }
    }
}

/// Sum over `spec.motifs()` of each motif's MAM.
pub fn build_mam(g: &DirectedGraph, spec: &MamSpec) -> Result<SymmetricSparseMatrix> {
    build_mam_with_stats(g, spec).map(|(m, _)| m)
}

/// Like [`build_mam`], also reporting the dense operation counts (all zero
/// when the sparse evaluator runs).
pub fn build_mam_with_stats(g: &DirectedGraph, spec: &MamSpec) -> Result<(SymmetricSparseMatrix, OpStats)> {
    let formulas: Vec<Formula> =
        spec.motifs.iter().map(|&name| formula::table_formula(name, spec.closure, spec.weighting)).collect();
    evaluate_sum(g, &formulas, spec.weighting, spec.resolve_method(g))
}

/// MAM from the generic per-class construction rather than the hand-written
/// table. Used to check the two against each other.
pub fn build_generic_mam(g: &DirectedGraph, spec: &MamSpec) -> Result<SymmetricSparseMatrix> {
    let formulas: Vec<Formula> = spec
        .motifs
        .iter()
        .map(|&name| formula::generic_formula(name.motif(), spec.closure, spec.weighting))
        .collect();
    evaluate_sum(g, &formulas, spec.weighting, spec.resolve_method(g)).map(|(m, _)| m)
}

fn evaluate_sum(
    g: &DirectedGraph,
    formulas: &[Formula],
    weighting: Weighting,
    method: Method,
) -> Result<(SymmetricSparseMatrix, OpStats)> {
    let unit;
    let graph = if weighting == Weighting::Unweighted {
        unit = g.unit_weights();
        &unit
    } else {
        g
    };
    let mats = build_matrices(graph);
    let mut total = SymmetricSparseMatrix::zeros(g.n());
    let mut stats = OpStats::default();
    for f in formulas {
        let m = match method {
            Method::Dense => {
                let (m, s) = dense::evaluate(&mats, f);
                stats += s;
                m
            }
            Method::Sparse | Method::Auto => sparse_eval::evaluate(&mats, f),
        };
        total = if total.nnz_stored() == 0 { m } else { total.add(&m) };
    }
    Ok((total, stats))
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closure::Functional => "functional",
            Closure::Structural => "structural",
        })
    }
}

impl FromStr for Closure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "func" | "functional" => Ok(Closure::Functional),
            "struc" | "structural" => Ok(Closure::Structural),
            _ => Err(Error::InvalidSpec(format!("unknown closure `{s}`"))),
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Unweighted => "unweighted",
            Weighting::Mean => "mean",
            Weighting::Product => "product",
        })
    }
}

impl FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unweighted" => Ok(Weighting::Unweighted),
            "mean" => Ok(Weighting::Mean),
            "product" => Ok(Weighting::Product),
            _ => Err(Error::InvalidSpec(format!("unknown weighting `{s}`"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Sparse => "sparse",
            Method::Auto => "auto",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" => Ok(Method::Dense),
            "sparse" => Ok(Method::Sparse),
            "auto" => Ok(Method::Auto),
            _ => Err(Error::InvalidSpec(format!("unknown method `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn cycle() -> DirectedGraph {
        DirectedGraph::new(3, [Edge::new(0, 1, 1.0), Edge::new(1, 2, 2.0), Edge::new(2, 0, 3.0)]).unwrap()
    }

    fn both(g: &DirectedGraph, spec: MamSpec) -> [SymmetricSparseMatrix; 2] {
        [Method::Dense, Method::Sparse].map(|m| build_mam(g, &spec.clone().with_method(m)).unwrap())
    }

    #[test]
    fn single_edge_symmetrizes() {
        let g = DirectedGraph::new(2, [Edge::new(0, 1, 7.0)]).unwrap();
        for m in both(&g, MamSpec::single(MotifName::Ms, Closure::Functional, Weighting::Mean)) {
            assert_eq!(m.get(0, 1), 7.0);
            assert_eq!(m.get(0, 0), 0.0);
        }
    }

    #[test]
    fn weighted_cycle() {
        let g = cycle();
        for m in both(&g, MamSpec::single(MotifName::M1, Closure::Functional, Weighting::Mean)) {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                assert!((m.get(i, j) - 2.0).abs() < 1e-12);
            }
        }
        for m in both(&g, MamSpec::single(MotifName::M1, Closure::Functional, Weighting::Product)) {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                assert!((m.get(i, j) - 6.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reciprocated_pair_mean() {
        let g = DirectedGraph::new(2, [Edge::new(0, 1, 2.0), Edge::new(1, 0, 5.0)]).unwrap();
        for m in both(&g, MamSpec::single(MotifName::Md, Closure::Functional, Weighting::Mean)) {
            assert_eq!(m.get(0, 1), 3.5);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            MamSpec::new(vec![], Closure::Functional, Weighting::Mean),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            MamSpec::new(vec![MotifName::M8, MotifName::M8], Closure::Functional, Weighting::Mean),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn auto_method_follows_density() {
        let spec = MamSpec::single(MotifName::M1, Closure::Functional, Weighting::Mean);
        assert_eq!(spec.resolve_method(&cycle()), Method::Dense);
        let sparse = DirectedGraph::from_pairs(100, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(spec.resolve_method(&sparse), Method::Sparse);
        let spec = spec.with_auto_threshold(0.0);
        assert_eq!(spec.resolve_method(&sparse), Method::Dense);
    }

    #[test]
    fn empty_graph_gives_empty_matrix() {
        let g = DirectedGraph::new(0, []).unwrap();
        let spec = MamSpec::single(MotifName::M5, Closure::Structural, Weighting::Mean);
        for m in both(&g, spec) {
            assert_eq!(m.n(), 0);
        }
    }

    #[test]
    fn summed_motifs() {
        let g = DirectedGraph::from_pairs(4, [(0, 1), (0, 2), (3, 1), (3, 2)]).unwrap();
        let sum = build_mam(
            &g,
            &MamSpec::new(vec![MotifName::M8, MotifName::M10], Closure::Functional, Weighting::Unweighted)
                .unwrap(),
        )
        .unwrap();
        let m8 = build_mam(&g, &MamSpec::single(MotifName::M8, Closure::Functional, Weighting::Unweighted))
            .unwrap();
        let m10 = build_mam(&g, &MamSpec::single(MotifName::M10, Closure::Functional, Weighting::Unweighted))
            .unwrap();
        assert_eq!(sum.max_abs_diff(&m8.add(&m10)), 0.0);
    }
}
