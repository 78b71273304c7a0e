use std::collections::BTreeMap;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::giant_component;
use super::MetricsError;
use crate::graph::{LegislationGraph, NodeIx};
use crate::seed::rng_for;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    /// Breadth-first search from every giant-component node.
    Exact,
    /// Breadth-first search from `sources` uniformly chosen giant-component nodes.
    Sampled { sources: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathOptions {
    pub mode: PathMode,
    /// Follow edge direction instead of the undirected projection.
    pub directed: bool,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions { mode: PathMode::Exact, directed: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMetrics {
    /// Mean distance over ordered reachable pairs.
    pub average_path_length: f64,
    pub diameter: u32,
    /// Distance → number of ordered pairs at that distance.
    pub distance_histogram: BTreeMap<u32, u64>,
    /// Size of the giant component the metrics are restricted to.
    pub component_size: usize,
    /// Smallest document id in that component; identifies it.
    pub component_min_id: String,
    pub sources: usize,
    /// True in sampled mode, where the diameter is only a lower bound.
    pub diameter_is_lower_bound: bool,
    pub directed: bool,
}

pub fn path_metrics(g: &LegislationGraph, mode: PathMode) -> Result<PathMetrics, MetricsError> {
    path_metrics_with(g, &PathOptions { mode, directed: false })
}

pub fn path_metrics_with(g: &LegislationGraph, opts: &PathOptions) -> Result<PathMetrics, MetricsError> {
    let giant = giant_component(g);
    if giant.len() < 2 {
        return Err(MetricsError::GiantTooSmall { size: giant.len() });
    }
    let (sources, sampled) = match opts.mode {
        PathMode::Exact => (giant.clone(), false),
        PathMode::Sampled { sources, .. } if sources >= giant.len() => (giant.clone(), false),
        PathMode::Sampled { sources, seed } => {
            let mut rng = rng_for(seed, "path-sources", 0);
            let mut picked: Vec<NodeIx> = sample(&mut rng, giant.len(), sources.max(1))
                .into_iter()
                .map(|i| giant[i])
                .collect();
            picked.sort_unstable();
            (picked, true)
        }
    };

    let proj = g.projection();
    let n = g.node_count();
    let directed = opts.directed;
    let hist = sources
        .par_iter()
        .map_init(
            || (vec![u32::MAX; n], Vec::with_capacity(n)),
            |(dist, queue), &s| {
                let mut local: Vec<u64> = Vec::new();
                queue.clear();
                dist[s] = 0;
                queue.push(s);
                let mut head = 0;
                while head < queue.len() {
                    let u = queue[head];
                    head += 1;
                    let du = dist[u];
                    let next: &[NodeIx] = if directed { g.successors(u) } else { proj.neighbors(u) };
                    for &v in next {
                        if dist[v] == u32::MAX {
                            dist[v] = du + 1;
                            let d = du as usize + 1;
                            if local.len() <= d {
                                local.resize(d + 1, 0);
                            }
                            local[d] += 1;
                            queue.push(v);
                        }
                    }
                }
                for &v in queue.iter() {
                    dist[v] = u32::MAX;
                }
                local
            },
        )
        .reduce(Vec::new, |mut a, b| {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        });

    let mut distance_histogram = BTreeMap::new();
    let mut pairs = 0u64;
    let mut total = 0u64;
    for (d, &c) in hist.iter().enumerate().skip(1) {
        if c > 0 {
            distance_histogram.insert(d as u32, c);
            pairs += c;
            total += c * d as u64;
        }
    }
    let diameter = distance_histogram.keys().next_back().copied().unwrap_or(0);
    Ok(PathMetrics {
        average_path_length: if pairs == 0 { 0.0 } else { total as f64 / pairs as f64 },
        diameter,
        distance_histogram,
        component_size: giant.len(),
        component_min_id: g.document(giant[0]).id.to_string(),
        sources: sources.len(),
        diameter_is_lower_bound: sampled,
        directed,
    })
}
