//! Local graph clustering with approximate personalized PageRank.
//!
//! Graphs can live in memory ([`Graph`]) or stay on disk as a sorted
//! AdjacencyList file that is searched on demand ([`DiskGraph`]). Both
//! implement [`LocalGraph`], which is all [`local_cluster`] needs.

pub mod cli;
pub mod cluster;
pub mod disk;
pub mod error;
mod extsort;
pub mod graph;
pub mod io;
pub mod laplacian;
pub mod random;

pub use cluster::{
    approximate_pagerank, local_cluster, local_cluster_acl, spectral_cluster, sweep_set, AclParams,
    PagerankPair, SparseVector, SweepResult,
};
pub use disk::DiskGraph;
pub use error::{Error, Result};
pub use graph::{
    conductance, cut_weight, local_conductance, volume, Graph, GraphBuilder, LocalGraph, Neighbor,
    VertexId, VertexSet,
};
pub use io::Format;
pub use laplacian::normalized_laplacian;
pub use random::{erdos_renyi, sbm, SbmSpec};
