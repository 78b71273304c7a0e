//! Bow-tie decomposition of the directed graph around its largest strongly
//! connected component.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{LegislationGraph, NodeIx};
use crate::metrics::weak_components;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BowTieError {
    #[error("cannot decompose an empty graph")]
    EmptyGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BowTieComponent {
    Core,
    In,
    Out,
    Tubes,
    Tendrils,
    Disconnected,
}

impl BowTieComponent {
    pub const ALL: [BowTieComponent; 6] = [
        BowTieComponent::Core,
        BowTieComponent::In,
        BowTieComponent::Out,
        BowTieComponent::Tubes,
        BowTieComponent::Tendrils,
        BowTieComponent::Disconnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BowTieComponent::Core => "core",
            BowTieComponent::In => "in",
            BowTieComponent::Out => "out",
            BowTieComponent::Tubes => "tubes",
            BowTieComponent::Tendrils => "tendrils",
            BowTieComponent::Disconnected => "disconnected",
        }
    }
}

/// Partition of the nodes into the six bow-tie sets. Sets hold sorted node
/// indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowTieDecomposition {
    #[serde(skip)]
    pub core: Vec<NodeIx>,
    #[serde(skip)]
    pub in_set: Vec<NodeIx>,
    #[serde(skip)]
    pub out_set: Vec<NodeIx>,
    #[serde(skip)]
    pub tubes: Vec<NodeIx>,
    #[serde(skip)]
    pub tendrils: Vec<NodeIx>,
    #[serde(skip)]
    pub disconnected: Vec<NodeIx>,
    pub sizes: BTreeMap<BowTieComponent, usize>,
    pub fractions: BTreeMap<BowTieComponent, f64>,
}

impl BowTieDecomposition {
    pub fn set(&self, c: BowTieComponent) -> &[NodeIx] {
        match c {
            BowTieComponent::Core => &self.core,
            BowTieComponent::In => &self.in_set,
            BowTieComponent::Out => &self.out_set,
            BowTieComponent::Tubes => &self.tubes,
            BowTieComponent::Tendrils => &self.tendrils,
            BowTieComponent::Disconnected => &self.disconnected,
        }
    }

    /// Component of every node.
    pub fn labels(&self, n: usize) -> Vec<BowTieComponent> {
        let mut out = vec![BowTieComponent::Disconnected; n];
        for c in BowTieComponent::ALL {
            for &v in self.set(c) {
                out[v] = c;
            }
        }
        out
    }
}

/// Strongly connected components via an iterative Tarjan traversal.
/// Returns a component id per node and the number of components.
pub fn strongly_connected_components(g: &LegislationGraph) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<NodeIx> = Vec::new();
    // (node, position in its successor list)
    let mut call: Vec<(NodeIx, usize)> = Vec::new();
    let mut next_index = 0;
    let mut count = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (comp, count)
}

/// Members of the largest SCC; ties go to the component containing the
/// smallest node index (= smallest id).
pub fn largest_scc(g: &LegislationGraph) -> Vec<NodeIx> {
    let (comp, count) = strongly_connected_components(g);
    if count == 0 {
        return Vec::new();
    }
    let mut size = vec![0usize; count];
    let mut min_member = vec![usize::MAX; count];
    for (v, &c) in comp.iter().enumerate() {
        size[c] += 1;
        min_member[c] = min_member[c].min(v);
    }
    let best = (0..count)
        .max_by(|&a, &b| size[a].cmp(&size[b]).then(min_member[b].cmp(&min_member[a])))
        .expect("non-empty");
    (0..g.node_count()).filter(|&v| comp[v] == best).collect()
}

pub fn decompose(g: &LegislationGraph) -> Result<BowTieDecomposition, BowTieError> {
    let n = g.node_count();
    if n == 0 {
        return Err(BowTieError::EmptyGraph);
    }
    let core = largest_scc(g);
    let mut in_core = vec![false; n];
    for &v in &core {
        in_core[v] = true;
    }
    let none = vec![false; n];

    let succ = |u: NodeIx| -> &[NodeIx] { g.successors(u) };
    let pred = |u: NodeIx| -> &[NodeIx] { g.predecessors(u) };

    let from_core = reach(&core, &none, succ, n);
    let to_core = reach(&core, &none, pred, n);
    let is_out: Vec<bool> = (0..n).map(|v| from_core[v] && !in_core[v]).collect();
    let is_in: Vec<bool> = (0..n).map(|v| to_core[v] && !in_core[v]).collect();

    let wc = weak_components(g.projection());
    let core_label = wc.labels[core[0]];

    let in_nodes: Vec<NodeIx> = (0..n).filter(|&v| is_in[v]).collect();
    let out_nodes: Vec<NodeIx> = (0..n).filter(|&v| is_out[v]).collect();
    // paths from IN that enter the core only lead into OUT, so stop there
    let from_in = reach(&in_nodes, &in_core, succ, n);
    let to_out = reach(&out_nodes, &in_core, pred, n);

    let mut sets: BTreeMap<BowTieComponent, Vec<NodeIx>> =
        BowTieComponent::ALL.iter().map(|&c| (c, Vec::new())).collect();
    for v in 0..n {
        let c = if in_core[v] {
            BowTieComponent::Core
        } else if is_in[v] {
            BowTieComponent::In
        } else if is_out[v] {
            BowTieComponent::Out
        } else if wc.labels[v] != core_label {
            BowTieComponent::Disconnected
        } else {
            match (from_in[v], to_out[v]) {
                (true, true) => BowTieComponent::Tubes,
                (true, false) | (false, true) => BowTieComponent::Tendrils,
                (false, false) => BowTieComponent::Disconnected,
            }
        };
        sets.get_mut(&c).expect("all components present").push(v);
    }

    let sizes: BTreeMap<_, _> = sets.iter().map(|(&c, s)| (c, s.len())).collect();
    let fractions = sizes.iter().map(|(&c, &s)| (c, s as f64 / n as f64)).collect();
    let mut take = |c| sets.remove(&c).expect("all components present");
    Ok(BowTieDecomposition {
        core: take(BowTieComponent::Core),
        in_set: take(BowTieComponent::In),
        out_set: take(BowTieComponent::Out),
        tubes: take(BowTieComponent::Tubes),
        tendrils: take(BowTieComponent::Tendrils),
        disconnected: take(BowTieComponent::Disconnected),
        sizes,
        fractions,
    })
}

fn reach<'a>(
    starts: &[NodeIx],
    blocked: &[bool],
    next: impl Fn(NodeIx) -> &'a [NodeIx],
    n: usize,
) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut stack: Vec<NodeIx> = Vec::new();
    for &s in starts {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &v in next(u) {
            if !seen[v] && !blocked[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Per-snapshot fractions of the largest SCC and the largest weak component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoreGcPoint {
    pub year: i32,
    pub scc_fraction: f64,
    pub gc_fraction: f64,
}

pub fn core_gc_fractions(g: &LegislationGraph) -> (f64, f64) {
    let n = g.node_count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let scc = largest_scc(g).len();
    let wc = weak_components(g.projection());
    let gc = wc.giant_label().map(|l| wc.sizes[l]).unwrap_or(0);
    (scc as f64 / n as f64, gc as f64 / n as f64)
}

pub fn core_gc_series(series: &[(i32, LegislationGraph)]) -> Vec<CoreGcPoint> {
    use rayon::prelude::*;
    series
        .par_iter()
        .map(|(year, g)| {
            let (scc_fraction, gc_fraction) = core_gc_fractions(g);
            CoreGcPoint { year: *year, scc_fraction, gc_fraction }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DocId, GraphBuilder, LegalDocument, RefType, Reference, Sector};

    fn graph(ids: &[&str], edges: &[(&str, &str)]) -> LegislationGraph {
        let mut b = GraphBuilder::new();
        for id in ids {
            b.add_document(
                LegalDocument::new(DocId::new(*id).unwrap(), Sector::Legislation, "2000-01-01".parse().unwrap(), None)
                    .unwrap(),
            )
            .unwrap();
        }
        for (s, t) in edges {
            b.add_reference(&Reference::new(DocId::new(*s).unwrap(), DocId::new(*t).unwrap(), RefType::InstrumentsCited))
                .unwrap();
        }
        b.seal()
    }

    fn ids(g: &LegislationGraph, set: &[NodeIx]) -> Vec<String> {
        set.iter().map(|&v| g.document(v).id.to_string()).collect()
    }

    #[test]
    fn cycle_with_in_and_out() {
        let g = graph(&["A", "B", "C", "D", "E"], &[("A", "B"), ("B", "C"), ("C", "A"), ("D", "A"), ("C", "E")]);
        let bt = decompose(&g).unwrap();
        assert_eq!(ids(&g, &bt.core), ["A", "B", "C"]);
        assert_eq!(ids(&g, &bt.in_set), ["D"]);
        assert_eq!(ids(&g, &bt.out_set), ["E"]);
        assert!(bt.tubes.is_empty() && bt.tendrils.is_empty() && bt.disconnected.is_empty());
    }

    #[test]
    fn all_six_components() {
        let g = graph(
            &["A", "B", "D", "E", "F", "G", "H"],
            &[("A", "B"), ("B", "A"), ("D", "A"), ("B", "E"), ("D", "F"), ("F", "E"), ("D", "G")],
        );
        let bt = decompose(&g).unwrap();
        assert_eq!(ids(&g, &bt.core), ["A", "B"]);
        assert_eq!(ids(&g, &bt.in_set), ["D"]);
        assert_eq!(ids(&g, &bt.out_set), ["E"]);
        assert_eq!(ids(&g, &bt.tubes), ["F"]);
        assert_eq!(ids(&g, &bt.tendrils), ["G"]);
        assert_eq!(ids(&g, &bt.disconnected), ["H"]);
        let total: f64 = bt.fractions.values().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn acyclic_core_is_smallest_id() {
        let g = graph(&["Q", "M", "Z"], &[("Q", "M"), ("M", "Z")]);
        let bt = decompose(&g).unwrap();
        assert_eq!(ids(&g, &bt.core), ["M"]);
        assert_eq!(ids(&g, &bt.in_set), ["Q"]);
        assert_eq!(ids(&g, &bt.out_set), ["Z"]);
        assert_eq!(decompose(&LegislationGraph::default()), Err(BowTieError::EmptyGraph));
    }

    #[test]
    fn series_fractions() {
        let single = graph(&["A"], &[]);
        let pts = core_gc_series(&[(2000, single), (2001, LegislationGraph::default())]);
        assert_eq!((pts[0].scc_fraction, pts[0].gc_fraction), (1.0, 1.0));
        assert_eq!((pts[1].scc_fraction, pts[1].gc_fraction), (0.0, 0.0));
    }
}
