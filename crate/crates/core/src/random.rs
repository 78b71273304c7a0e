//! Erdős–Rényi null graphs and the small-world comparison against them.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DocId, GraphBuilder, LegalDocument, LegislationGraph, RefType, Sector};
use crate::metrics::{giant_component, local_clustering, path_metrics, PathMode};
use crate::seed::{derive_seed, rng_for};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandomModelError {
    #[error("{m} directed edges do not fit on {n} nodes (at most {max})")]
    Infeasible { n: usize, m: usize, max: u128 },
    #[error("giant component has {size} nodes; at least {required} needed")]
    GiantTooSmall { size: usize, required: usize },
    #[error("all {replicas} null replicas were degenerate")]
    AllReplicasSkipped { replicas: usize },
    #[error("at least one replica is required")]
    NoReplicas,
}

pub const MIN_GIANT: usize = 10;

/// Uniform random directed graph with exactly `m` distinct edges on `n`
/// nodes, no self-loops.
///
/// Nodes are `ER00000`, `ER00001`, … (zero padded to a common width) with
/// sector 3 and the sentinel validity interval; edges are of kind `other`.
pub fn erdos_renyi(n: usize, m: usize, seed: u64) -> Result<LegislationGraph, RandomModelError> {
    let slots = n as u128 * n.saturating_sub(1) as u128;
    if m as u128 > slots {
        return Err(RandomModelError::Infeasible { n, m, max: slots });
    }
    let width = n.saturating_sub(1).to_string().len().max(5);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        let doc = LegalDocument::placeholder(
            DocId::new(format!("ER{i:0width$}")).expect("non-empty id"),
            Sector::Legislation,
        );
        b.add_document(doc).expect("fresh ids");
    }
    let mut rng = rng_for(seed, "erdos-renyi", 0);
    // slot s encodes the ordered pair (s / (n-1), t) where t skips the source
    for s in sample(&mut rng, slots as usize, m).into_iter() {
        let u = s / (n - 1);
        let mut v = s % (n - 1);
        if v >= u {
            v += 1;
        }
        b.push_edge(u, v, RefType::Other);
    }
    Ok(b.seal())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmallWorldConfig {
    pub replicas: usize,
    pub seed: u64,
    /// Short paths when `L_net <= length_factor · L_rand`.
    pub length_factor: f64,
    /// High clustering when `C_net >= clustering_factor · C_rand`.
    pub clustering_factor: f64,
    /// Giant components larger than this use sampled path lengths.
    pub sampled_above: usize,
    pub sampled_sources: usize,
}

impl Default for SmallWorldConfig {
    fn default() -> Self {
        SmallWorldConfig {
            replicas: 10,
            seed: 0,
            length_factor: 1.5,
            clustering_factor: 10.0,
            sampled_above: 100_000,
            sampled_sources: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallWorldReport {
    #[serde(rename = "L_net")]
    pub l_net: f64,
    #[serde(rename = "C_net")]
    pub c_net: f64,
    #[serde(rename = "L_rand")]
    pub l_rand: f64,
    #[serde(rename = "C_rand")]
    pub c_rand: f64,
    pub small_world_verdict: bool,
    pub short_paths: bool,
    pub high_clustering: bool,
    pub rand_replicas: usize,
    pub skipped_replicas: usize,
    /// `ln n / ln ⟨k⟩` with `⟨k⟩ = 2m / n`.
    pub analytic_l_rand: f64,
    /// `⟨k⟩ / n`.
    pub analytic_c_rand: f64,
    pub nodes: usize,
    pub edges: usize,
    pub giant_size: usize,
    pub sampled_paths: bool,
}

/// Average path length and mean local clustering over the giant component.
fn giant_l_and_c(g: &LegislationGraph, cfg: &SmallWorldConfig, replica: u64) -> Option<(f64, f64, usize, bool)> {
    let giant = giant_component(g);
    if giant.len() < 2 {
        return None;
    }
    let sampled = giant.len() > cfg.sampled_above;
    let mode = if sampled {
        PathMode::Sampled {
            sources: cfg.sampled_sources,
            seed: derive_seed(cfg.seed, "smallworld-sources", replica),
        }
    } else {
        PathMode::Exact
    };
    let paths = path_metrics(g, mode).ok()?;
    let local = local_clustering(g.projection());
    let c = giant.iter().map(|&v| local[v]).sum::<f64>() / giant.len() as f64;
    Some((paths.average_path_length, c, giant.len(), sampled))
}

/// Compares `g` against `cfg.replicas` Erdős–Rényi graphs with the same
/// node and typed-edge counts, each measured like `g` on its giant
/// component. Degenerate replicas are skipped and counted.
pub fn small_world_compare(g: &LegislationGraph, cfg: &SmallWorldConfig) -> Result<SmallWorldReport, RandomModelError> {
    if cfg.replicas == 0 {
        return Err(RandomModelError::NoReplicas);
    }
    let size = giant_component(g).len();
    if size < MIN_GIANT {
        return Err(RandomModelError::GiantTooSmall { size, required: MIN_GIANT });
    }
    let (n, m) = (g.node_count(), g.edge_count());
    let (l_net, c_net, giant_size, sampled) = giant_l_and_c(g, cfg, u64::MAX).expect("giant checked");

    let nulls: Vec<Option<(f64, f64)>> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let er = erdos_renyi(n, m, derive_seed(cfg.seed, "smallworld-null", r as u64))?;
            Ok(giant_l_and_c(&er, cfg, r as u64).map(|(l, c, _, _)| (l, c)))
        })
        .collect::<Result<_, RandomModelError>>()?;
    let ok: Vec<(f64, f64)> = nulls.into_iter().flatten().collect();
    if ok.is_empty() {
        return Err(RandomModelError::AllReplicasSkipped { replicas: cfg.replicas });
    }
    let l_rand = ok.iter().map(|p| p.0).sum::<f64>() / ok.len() as f64;
    let c_rand = ok.iter().map(|p| p.1).sum::<f64>() / ok.len() as f64;

    let short_paths = l_net <= cfg.length_factor * l_rand;
    let high_clustering = c_net >= cfg.clustering_factor * c_rand;
    let k = 2.0 * m as f64 / n as f64;
    Ok(SmallWorldReport {
        l_net,
        c_net,
        l_rand,
        c_rand,
        small_world_verdict: short_paths && high_clustering,
        short_paths,
        high_clustering,
        rand_replicas: ok.len(),
        skipped_replicas: cfg.replicas - ok.len(),
        analytic_l_rand: if k > 1.0 { (n as f64).ln() / k.ln() } else { f64::NAN },
        analytic_c_rand: k / n as f64,
        nodes: n,
        edges: m,
        giant_size,
        sampled_paths: sampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_sizes() {
        let g = erdos_renyi(10, 0, 1).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (10, 0));
        let g = erdos_renyi(10, 90, 1).unwrap();
        assert_eq!(g.edge_count(), 90);
        for u in 0..10 {
            assert_eq!(g.out_degree(u), 9);
        }
        assert!(matches!(erdos_renyi(10, 91, 1), Err(RandomModelError::Infeasible { .. })));
        assert_eq!(erdos_renyi(0, 0, 1).unwrap().node_count(), 0);
        assert_eq!(erdos_renyi(1, 0, 1).unwrap().node_count(), 1);
    }

    #[test]
    fn placeholders_and_determinism() {
        let a = erdos_renyi(50, 120, 7).unwrap();
        let b = erdos_renyi(50, 120, 7).unwrap();
        let c = erdos_renyi(50, 120, 8).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        assert_ne!(a.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
        assert!(a.documents().iter().all(|d| d.sector == Sector::Legislation && !d.has_sunset()));
        assert_eq!(a.documents()[3].id.as_str(), "ER00003");
        assert!(a.edges().all(|(s, t, _)| s != t));
    }

    #[test]
    fn small_giant_rejected() {
        let g = erdos_renyi(8, 20, 1).unwrap();
        assert!(matches!(
            small_world_compare(&g, &SmallWorldConfig::default()),
            Err(RandomModelError::GiantTooSmall { .. })
        ));
    }

    #[test]
    fn clique_is_not_small_world() {
        let g = erdos_renyi(12, 132, 1).unwrap();
        let r = small_world_compare(&g, &SmallWorldConfig { replicas: 3, ..Default::default() }).unwrap();
        assert_eq!(r.c_net, 1.0);
        assert_eq!(r.c_rand, 1.0);
        assert!(!r.small_world_verdict);
    }
}
