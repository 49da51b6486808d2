//! Weighted motif adjacency matrices and motif-based spectral clustering for
//! directed and bipartite networks.

pub mod error;
pub mod eval;
pub mod graph;
pub mod mam;
pub mod partition;
pub mod sparse;
pub mod spectral;
pub mod synth;

pub use error::{Error, Result};
pub use eval::{aat_similarity, ari, cir_matrix, ncut, nmi, sweep_profile, CirMatrix, SweepProfile};
pub use graph::{build_matrices, DirectedGraph, Edge, GraphMatrices};
pub use mam::{build_mam, Closure, MamSpec, Method, MotifName, Weighting};
pub use partition::Partition;
pub use sparse::{CsrMatrix, SymmetricSparseMatrix};
pub use spectral::{cluster, motif_cluster, ClusterConfig, Tau};
pub use synth::{sample_ba, sample_bsbm, sample_dsbm, sample_er, BsbmParams, BsbmSample, DsbmParams};
