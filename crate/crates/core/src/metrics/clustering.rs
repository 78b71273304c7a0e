use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{LegislationGraph, SimpleProjection};

/// Degrees with fewer nodes than this are left out of the C(k) regression.
pub const MIN_SLOPE_REPRESENTATIVES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringProfile {
    /// Mean local coefficient over all nodes (degree < 2 counts as 0).
    pub global_average: f64,
    /// Degree k → mean local coefficient of degree-k nodes.
    pub per_degree: BTreeMap<usize, f64>,
    pub per_degree_counts: BTreeMap<usize, usize>,
    /// Least-squares slope of ln C(k) against ln k; `None` with fewer than
    /// two usable degrees.
    pub loglog_slope: Option<f64>,
    pub slope_points: usize,
    #[serde(skip)]
    pub local: Vec<f64>,
}

pub fn clustering(g: &LegislationGraph) -> ClusteringProfile {
    clustering_with(g, MIN_SLOPE_REPRESENTATIVES)
}

pub fn clustering_with(g: &LegislationGraph, min_representatives: usize) -> ClusteringProfile {
    let p = g.projection();
    let local = local_clustering(p);
    let n = local.len();
    let global_average = if n == 0 { 0.0 } else { local.iter().sum::<f64>() / n as f64 };

    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (v, &c) in local.iter().enumerate() {
        let e = sums.entry(p.degree(v)).or_insert((0.0, 0));
        e.0 += c;
        e.1 += 1;
    }
    let per_degree: BTreeMap<usize, f64> = sums.iter().map(|(&k, &(s, c))| (k, s / c as f64)).collect();
    let per_degree_counts = sums.iter().map(|(&k, &(_, c))| (k, c)).collect();

    let points: Vec<(f64, f64)> = sums
        .iter()
        .filter(|(_, &(s, c))| c >= min_representatives && s > 0.0)
        .map(|(&k, &(s, c))| ((k as f64).ln(), (s / c as f64).ln()))
        .collect();
    let loglog_slope = least_squares_slope(&points);

    ClusteringProfile {
        global_average,
        per_degree,
        per_degree_counts,
        loglog_slope,
        slope_points: points.len(),
        local,
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Local clustering coefficient of every node.
///
/// Triangles are counted once each by orienting edges from lower to higher
/// (degree, index) rank and intersecting forward neighborhoods.
pub fn local_clustering(p: &SimpleProjection) -> Vec<f64> {
    let n = p.node_count();
    let rank = |v: usize| (p.degree(v), v);
    let mut fwd_off = Vec::with_capacity(n + 1);
    fwd_off.push(0);
    let mut fwd = Vec::with_capacity(p.edge_count());
    for u in 0..n {
        fwd.extend(p.neighbors(u).iter().copied().filter(|&v| rank(v) > rank(u)));
        fwd_off.push(fwd.len());
    }
    let forward = |u: usize| &fwd[fwd_off[u]..fwd_off[u + 1]];

    let mut triangles = vec![0u64; n];
    let mut mark = vec![usize::MAX; n];
    for u in 0..n {
        for &w in forward(u) {
            mark[w] = u;
        }
        for &v in forward(u) {
            for &w in forward(v) {
                if mark[w] == u {
                    triangles[u] += 1;
                    triangles[v] += 1;
                    triangles[w] += 1;
                }
            }
        }
    }

    (0..n)
        .map(|v| {
            let d = p.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * triangles[v] as f64 / (d * (d - 1.0))
            }
        })
        .collect()
}
