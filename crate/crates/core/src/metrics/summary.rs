use serde::{Deserialize, Serialize};

use super::{components, PathMetrics};
use crate::graph::LegislationGraph;

/// The basic-properties row reported per network: sizes, average degree,
/// path statistics and giant-component coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub nodes: usize,
    pub edges: usize,
    /// `2E / N` over typed edges.
    pub average_degree: f64,
    /// `None` when the giant component has fewer than two nodes.
    pub diameter: Option<u32>,
    pub average_path_length: Option<f64>,
    pub diameter_is_lower_bound: bool,
    pub giant_size: usize,
    pub gc_fraction: f64,
    pub isolated: usize,
}

/// `paths` are the giant-component path metrics of `g`, when defined.
pub fn network_summary(g: &LegislationGraph, paths: Option<&PathMetrics>) -> NetworkSummary {
    let n = g.node_count();
    let c = components(g);
    NetworkSummary {
        nodes: n,
        edges: g.edge_count(),
        average_degree: if n == 0 { 0.0 } else { 2.0 * g.edge_count() as f64 / n as f64 },
        diameter: paths.map(|p| p.diameter),
        average_path_length: paths.map(|p| p.average_path_length),
        diameter_is_lower_bound: paths.is_some_and(|p| p.diameter_is_lower_bound),
        giant_size: c.giant_size,
        gc_fraction: c.gc_fraction,
        isolated: c.isolated_count,
    }
}
