//! Random-walk spectral clustering of similarity matrices and MAMs.

mod eigen;
mod kmeans;
mod laplacian;

pub use eigen::{embed, Embedding, DENSE_EIGEN_LIMIT};
pub use kmeans::{kmeans_pp, KMeansConfig, KMeansResult};
pub use laplacian::{regularized_rw_laplacian, rw_laplacian, RwLaplacian};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{largest_component, restrict, DirectedGraph};
use crate::mam::{bipartite_mams, build_mam, MamSpec, Weighting};
use crate::partition::Partition;
use crate::sparse::SymmetricSparseMatrix;

/// Regularization strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tau {
    Value(f64),
    /// The mean weighted degree of the matrix being clustered.
    MeanDegree,
}

impl Tau {
    pub fn resolve(self, m: &SymmetricSparseMatrix) -> f64 {
        match self {
            Tau::Value(t) => t,
            Tau::MeanDegree => mean_degree(m),
        }
    }
}

pub fn mean_degree(m: &SymmetricSparseMatrix) -> f64 {
    if m.n() == 0 {
        return 0.0;
    }
    m.degrees().iter().sum::<f64>() / m.n() as f64
}

impl FromStr for Tau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("mean-degree") {
            return Ok(Tau::MeanDegree);
        }
        match s.parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(Tau::Value(t)),
            _ => Err(Error::InvalidParameter(format!(
                "tau must be a non-negative number or `mean-degree`, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Value(t) => write!(f, "{t}"),
            Tau::MeanDegree => f.write_str("mean-degree"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterConfig {
    /// Number of clusters.
    pub k: usize,
    /// Number of eigenvectors; the embedding has `l - 1` dimensions.
    pub l: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub tau: Option<Tau>,
}

impl ClusterConfig {
    pub fn new(k: usize, l: usize, seed: u64) -> Self {
        ClusterConfig { k, l, restarts: 10, max_iters: 300, tol: 1e-10, seed, tau: None }
    }

    pub fn with_tau(mut self, tau: Tau) -> Self {
        self.tau = Some(tau);
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidParameter(format!("k = {} must lie in [1, {n}]", self.k)));
        }
        if self.l < 2 || self.l > n {
            return Err(Error::InvalidParameter(format!("l = {} must lie in [2, {n}]", self.l)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        Ok(())
    }

    fn kmeans(&self) -> KMeansConfig {
        KMeansConfig {
            k: self.k,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

/// Outcome of clustering one similarity matrix.
#[derive(Debug, Clone)]
pub struct SpectralClustering {
    pub partition: Partition,
    pub embedding: Embedding,
    /// Regularization actually applied (zero when none).
    pub tau: f64,
    pub wcss: f64,
}

/// Laplacian, embedding and k-means on `m`. Every vertex is labelled; `m`
/// must be connected unless a positive `tau` is configured.
pub fn cluster(m: &SymmetricSparseMatrix, cfg: &ClusterConfig) -> Result<Partition> {
    cluster_detailed(m, cfg).map(|c| c.partition)
}

pub fn cluster_detailed(m: &SymmetricSparseMatrix, cfg: &ClusterConfig) -> Result<SpectralClustering> {
    let n = m.n();
    cfg.validate(n)?;
    let tau = cfg.tau.map_or(0.0, |t| t.resolve(m));
    let op = RwLaplacian::regularized(m, tau)?;
    let embedding = embed(&op, cfg.l)?;
    let km = kmeans_pp(embedding.points.view(), &cfg.kmeans())?;
    let partition = Partition::new(km.labels.into_iter().map(Some).collect(), cfg.k)?;
    Ok(SpectralClustering { partition, embedding, tau, wcss: km.wcss })
}

/// Outcome of motif-based clustering of a directed graph.
#[derive(Debug, Clone)]
pub struct MotifClustering {
    /// One label per graph vertex; `None` outside the clustered component.
    pub partition: Partition,
    /// Sorted ids of the clustered vertices.
    pub component: Vec<usize>,
    /// The MAM restricted to `component`.
    pub mam: SymmetricSparseMatrix,
    pub embedding: Embedding,
    pub tau: f64,
    pub wcss: f64,
}

/// Builds the MAM, keeps its largest connected component (all vertices when
/// regularizing with a positive tau) and clusters it.
pub fn motif_cluster(g: &DirectedGraph, spec: &MamSpec, cfg: &ClusterConfig) -> Result<MotifClustering> {
    let mam = build_mam(g, spec)?;
    cluster_similarity(&mam, cfg)
}

/// Component selection and clustering for an already built similarity
/// matrix; the returned partition spans all of its vertices.
pub fn cluster_similarity(m: &SymmetricSparseMatrix, cfg: &ClusterConfig) -> Result<MotifClustering> {
    let n = m.n();
    let regularized = match cfg.tau {
        Some(t) => t.resolve(m) > 0.0,
        None => false,
    };
    let component: Vec<usize> = if regularized { (0..n).collect() } else { largest_component(m) };
    let required = cfg.k.max(cfg.l) + 1;
    if component.len() < required {
        return Err(Error::ComponentTooSmall { size: component.len(), required });
    }
    let sub = restrict(m, &component)?;
    let c = cluster_detailed(&sub, cfg)?;
    Ok(MotifClustering {
        partition: Partition::scatter(n, &component, &c.partition),
        component,
        mam: sub,
        embedding: c.embedding,
        tau: c.tau,
        wcss: c.wcss,
    })
}

/// Cluster counts and embedding dimensions for the two sides of a
/// bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    pub ks: usize,
    pub ls: usize,
    pub kd: usize,
    pub ld: usize,
}

#[derive(Debug, Clone)]
pub struct BipartiteClustering {
    /// Sorted source ids; `source_partition` is indexed like this list.
    pub sources: Vec<usize>,
    pub source_partition: Partition,
    pub destinations: Vec<usize>,
    pub destination_partition: Partition,
}

/// Clusters sources by their collider MAM and destinations by their expander
/// MAM, each restricted to its largest connected component.
pub fn bipartite_cluster(
    g: &DirectedGraph,
    sources: &[usize],
    destinations: &[usize],
    dims: BipartiteDims,
    weighting: Weighting,
    cfg: &ClusterConfig,
) -> Result<BipartiteClustering> {
    let b = bipartite_mams(g, sources, destinations, weighting)?;
    let side = |m: &SymmetricSparseMatrix, k, l| {
        cluster_similarity(m, &ClusterConfig { k, l, ..*cfg }).map(|c| c.partition)
    };
    Ok(BipartiteClustering {
        source_partition: side(&b.collider, dims.ks, dims.ls)?,
        destination_partition: side(&b.expander, dims.kd, dims.ld)?,
        sources: b.sources,
        destinations: b.destinations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mam::{Closure, MotifName};

    fn two_cliques() -> SymmetricSparseMatrix {
        let mut t = Vec::new();
        for off in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    t.push((off + i, off + j, 1.0));
                }
            }
        }
        t.push((3, 4, 0.1));
        SymmetricSparseMatrix::from_triplets(8, t).unwrap()
    }

    #[test]
    fn weakly_joined_cliques_split() {
        let p = cluster(&two_cliques(), &ClusterConfig::new(2, 2, 1)).unwrap();
        let l = p.labels();
        assert!(l[..4].iter().all(|&x| x == l[0]));
        assert!(l[4..].iter().all(|&x| x == l[4]));
        assert_ne!(l[0], l[4]);
    }

    #[test]
    fn single_cluster_and_determinism() {
        let p = cluster(&two_cliques(), &ClusterConfig::new(1, 2, 1)).unwrap();
        assert!(p.labels().iter().all(|&l| l == Some(0)));
        let cfg = ClusterConfig::new(2, 3, 5);
        assert_eq!(cluster(&two_cliques(), &cfg).unwrap(), cluster(&two_cliques(), &cfg).unwrap());
    }

    #[test]
    fn empty_motif_mam_is_too_small() {
        let g = DirectedGraph::from_pairs(5, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let spec = MamSpec::single(MotifName::M4, Closure::Functional, Weighting::Mean);
        assert!(matches!(
            motif_cluster(&g, &spec, &ClusterConfig::new(2, 2, 1)),
            Err(Error::ComponentTooSmall { size: 1, required: 3 })
        ));
    }

    #[test]
    fn unreached_vertices_are_unclustered() {
        let mut pairs = Vec::new();
        for off in [0, 4] {
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        pairs.push((off + i, off + j));
                    }
                }
            }
        }
        pairs.push((3, 4));
        pairs.push((8, 9));
        let g = DirectedGraph::from_pairs(10, pairs).unwrap();
        let spec = MamSpec::single(MotifName::Ms, Closure::Functional, Weighting::Mean);
        let c = motif_cluster(&g, &spec, &ClusterConfig::new(2, 2, 3)).unwrap();
        assert_eq!(c.component, (0..8).collect::<Vec<_>>());
        assert_eq!(c.partition.label(8), None);
        assert_eq!(c.partition.label(9), None);
        assert_eq!(c.partition.clustered_count(), 8);
    }

    #[test]
    fn tau_parsing() {
        assert_eq!("mean-degree".parse::<Tau>().unwrap(), Tau::MeanDegree);
        assert_eq!("0.5".parse::<Tau>().unwrap(), Tau::Value(0.5));
        assert!("-1".parse::<Tau>().is_err());
        assert_eq!(Tau::MeanDegree.resolve(&two_cliques()), (24.0 + 0.2) / 8.0);
    }

    #[test]
    fn bipartite_stars_joined_by_a_weak_destination() {
        // sources 0..4 -> hub 8, sources 4..8 -> hub 9, sources 3 and 4 -> 10
        let mut edges = Vec::new();
        for s in 0..8 {
            edges.push(crate::graph::Edge::new(s, if s < 4 { 8 } else { 9 }, 5.0));
        }
        edges.push(crate::graph::Edge::new(3, 10, 1.0));
        edges.push(crate::graph::Edge::new(4, 10, 1.0));
        let g = DirectedGraph::new(11, edges).unwrap();
        let dims = BipartiteDims { ks: 2, ls: 2, kd: 1, ld: 2 };
        let sources: Vec<usize> = (0..8).collect();
        let c =
            bipartite_cluster(&g, &sources, &[8, 9, 10], dims, Weighting::Mean, &ClusterConfig::new(2, 2, 1))
                .unwrap();
        let l = c.source_partition.labels();
        assert!(l[..4].iter().all(|&x| x == l[0]));
        assert!(l[4..].iter().all(|&x| x == l[4]));
        assert_ne!(l[0], l[4]);
        assert!(c.destination_partition.labels().iter().all(|&x| x == Some(0)));
    }
}
