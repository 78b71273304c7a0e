//! Structural metrics: degree statistics and inequality, clustering, path
//! lengths, weak components and assortativity.
//!
//! Degree statistics stay on the directed typed multigraph; clustering,
//! paths and assortativity use the simple undirected projection.

mod assortativity;
mod clustering;
mod components;
mod degree;
mod paths;
mod summary;

use thiserror::Error;

pub use assortativity::{assortativity, AssortativityCriterion};
pub use clustering::{clustering, clustering_with, local_clustering, ClusteringProfile, MIN_SLOPE_REPRESENTATIVES};
pub use components::{components, giant_component, weak_components, ComponentReport, WeakComponents};
pub use degree::{degree_stats, lorenz_gini, lorenz_gini_of, DegreeStats, LorenzGini};
pub use paths::{path_metrics, path_metrics_with, PathMetrics, PathMode, PathOptions};
pub use summary::{network_summary, NetworkSummary};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("giant component has {size} node(s); at least 2 are needed")]
    GiantTooSmall { size: usize },
    #[error("projection has {edges} edge(s); at least 2 are needed")]
    TooFewEdges { edges: usize },
    #[error("assortativity undefined: {0}")]
    ZeroVariance(&'static str),
}
