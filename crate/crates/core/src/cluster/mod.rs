//! Local clustering (ACL) and global spectral clustering.

mod acl;
pub mod kmeans;
pub mod metrics;
mod spectral;

pub use acl::{
    approximate_pagerank, local_cluster, local_cluster_acl, local_cluster_acl_sweep, sweep_set,
    AclParams, PagerankPair, SparseVector, SweepResult, DEFAULT_ALPHA,
};
pub use spectral::{
    smallest_eigenvectors, spectral_cluster, DENSE_EIGEN_LIMIT, EIGEN_MAX_ITERATIONS,
    EIGEN_TOLERANCE,
};
