use serde::{Deserialize, Serialize};

use crate::graph::{LegislationGraph, NodeIx, SimpleProjection};

/// Weakly connected components (edge direction ignored).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakComponents {
    /// Component label per node; labels are numbered in order of each
    /// component's smallest node index.
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl WeakComponents {
    /// Label of the largest component, ties broken by smallest member index.
    pub fn giant_label(&self) -> Option<usize> {
        // labels are assigned in min-member order, so the first maximum wins
        let max = *self.sizes.iter().max()?;
        self.sizes.iter().position(|&s| s == max)
    }

    pub fn members(&self, label: usize) -> Vec<NodeIx> {
        (0..self.labels.len()).filter(|&v| self.labels[v] == label).collect()
    }
}

pub fn weak_components(p: &SimpleProjection) -> WeakComponents {
    let n = p.node_count();
    let mut labels = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let label = sizes.len();
        labels[start] = label;
        stack.push(start);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in p.neighbors(u) {
                if labels[v] == usize::MAX {
                    labels[v] = label;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    WeakComponents { labels, sizes }
}

/// Sorted node indices of the largest weak component (empty for an empty graph).
pub fn giant_component(g: &LegislationGraph) -> Vec<NodeIx> {
    let wc = weak_components(g.projection());
    wc.giant_label().map(|l| wc.members(l)).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    #[serde(skip)]
    pub giant_component_ids: Vec<NodeIx>,
    pub giant_size: usize,
    pub gc_fraction: f64,
    /// Nodes with zero typed degree.
    pub isolated_count: usize,
    pub component_count: usize,
}

pub fn components(g: &LegislationGraph) -> ComponentReport {
    let wc = weak_components(g.projection());
    let giant = wc.giant_label().map(|l| wc.members(l)).unwrap_or_default();
    let n = g.node_count();
    ComponentReport {
        giant_size: giant.len(),
        gc_fraction: if n == 0 { 0.0 } else { giant.len() as f64 / n as f64 },
        giant_component_ids: giant,
        isolated_count: (0..n).filter(|&v| g.total_degree(v) == 0).count(),
        component_count: wc.sizes.len(),
    }
}
