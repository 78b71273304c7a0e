//! Slow, obviously-correct reference computations for checking the lexnet
//! algorithms, plus random graph and corpus builders for the test suites.
//!
//! Nothing here shares code with the routines it checks beyond the graph
//! accessors.

use std::collections::{BTreeSet, VecDeque};

use chrono::{Duration, NaiveDate};
use lexnet::bowtie::BowTieComponent;
use lexnet::{DocId, GraphBuilder, LegalDocument, LegislationGraph, RefType, Reference, Sector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn doc_id(i: usize) -> DocId {
    DocId::new(format!("D{i:05}")).expect("valid id")
}

fn date(days: i64) -> NaiveDate {
    NaiveDate::from_ymd_opt(1950, 1, 1).unwrap() + Duration::days(days)
}

/// A random typed multigraph on `n` nodes with about `density * n` edges.
/// Sectors, reference kinds and validity intervals are random too; about a
/// third of the documents expire.
pub fn random_graph(n: usize, density: f64, seed: u64) -> LegislationGraph {
    let mut r = rng(seed);
    let mut b = GraphBuilder::new();
    for i in 0..n {
        let effect = r.random_range(0..365 * 60);
        let expiry = r.random_bool(0.35).then(|| date(effect + r.random_range(0..365 * 20)));
        let sector = Sector::ALL[r.random_range(0..6)];
        b.add_document(LegalDocument::new(doc_id(i), sector, date(effect), expiry).unwrap())
            .unwrap();
    }
    if n >= 2 {
        let m = (density * n as f64).round() as usize;
        for _ in 0..m {
            let s = r.random_range(0..n);
            let mut t = r.random_range(0..n - 1);
            if t >= s {
                t += 1;
            }
            let kind = RefType::ALL[r.random_range(0..6)];
            b.add_reference(&Reference::new(doc_id(s), doc_id(t), kind)).unwrap();
        }
    }
    b.seal()
}

/// Plain directed edge list of `g` with parallel typed edges collapsed.
pub fn arcs(g: &LegislationGraph) -> Vec<(usize, usize)> {
    let set: BTreeSet<(usize, usize)> = g.edges().map(|(s, t, _)| (s, t)).collect();
    set.into_iter().collect()
}

/// Undirected neighbor sets, direction and kind ignored.
pub fn undirected_adjacency(g: &LegislationGraph) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); g.node_count()];
    for (s, t, _) in g.edges() {
        adj[s].insert(t);
        adj[t].insert(s);
    }
    adj
}

/// Warshall transitive closure; `r[u][v]` iff a path of length >= 0 leads
/// from u to v.
pub fn reachability(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (u, row) in r.iter_mut().enumerate() {
        row[u] = true;
    }
    for &(u, v) in arcs {
        r[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let (row_k, row_i) = if i < k {
                    let (a, b) = r.split_at_mut(k);
                    (&b[0], &mut a[i])
                } else if i > k {
                    let (a, b) = r.split_at_mut(i);
                    (&a[k], &mut b[0])
                } else {
                    continue;
                };
                for j in 0..n {
                    row_i[j] |= row_k[j];
                }
            }
        }
    }
    r
}

/// Bow-tie classification straight from reachability matrices.
pub fn bowtie_labels(g: &LegislationGraph) -> Vec<BowTieComponent> {
    let n = g.node_count();
    let a = arcs(g);
    let r = reachability(n, &a);

    // largest mutual-reachability class, ties to the smallest member
    let mut core: Vec<usize> = Vec::new();
    for u in 0..n {
        let class: Vec<usize> = (0..n).filter(|&v| r[u][v] && r[v][u]).collect();
        if class[0] == u && class.len() > core.len() {
            core = class;
        }
    }
    let c = core[0];
    let in_core: Vec<bool> = (0..n).map(|v| r[c][v] && r[v][c]).collect();

    // reachability that never touches the core
    let outside: Vec<(usize, usize)> = a.iter().copied().filter(|&(u, v)| !in_core[u] && !in_core[v]).collect();
    let r_out = reachability(n, &outside);

    let undirected: Vec<(usize, usize)> = a.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
    let weak = reachability(n, &undirected);

    let is_in: Vec<bool> = (0..n).map(|v| !in_core[v] && r[v][c]).collect();
    let is_out: Vec<bool> = (0..n).map(|v| !in_core[v] && r[c][v]).collect();
    (0..n)
        .map(|v| {
            if in_core[v] {
                BowTieComponent::Core
            } else if is_in[v] {
                BowTieComponent::In
            } else if is_out[v] {
                BowTieComponent::Out
            } else if !weak[c][v] {
                BowTieComponent::Disconnected
            } else {
                let from_in = (0..n).any(|i| is_in[i] && r_out[i][v]);
                let to_out = (0..n).any(|o| is_out[o] && r_out[v][o]);
                match (from_in, to_out) {
                    (true, true) => BowTieComponent::Tubes,
                    (false, false) => BowTieComponent::Disconnected,
                    _ => BowTieComponent::Tendrils,
                }
            }
        })
        .collect()
}

/// Floyd–Warshall hop distances over the undirected view.
pub fn floyd_warshall(adj: &[BTreeSet<usize>]) -> Vec<Vec<Option<u32>>> {
    let n = adj.len();
    let mut d = vec![vec![None; n]; n];
    for u in 0..n {
        d[u][u] = Some(0);
        for &v in &adj[u] {
            d[u][v] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|x| ik + kj < x) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Local clustering by enumerating every neighbor pair.
pub fn triangle_clustering(adj: &[BTreeSet<usize>]) -> Vec<f64> {
    adj.iter()
        .map(|nb| {
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let nb: Vec<usize> = nb.iter().copied().collect();
            let mut links = 0usize;
            for i in 0..k {
                for j in i + 1..k {
                    if adj[nb[i]].contains(&nb[j]) {
                        links += 1;
                    }
                }
            }
            links as f64 / (k * (k - 1) / 2) as f64
        })
        .collect()
}

/// Weak component sizes via union-find, largest first.
pub fn component_sizes(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
        }
    }
    let mut sizes = vec![0usize; n];
    for v in 0..n {
        let root = find(&mut parent, v);
        sizes[root] += 1;
    }
    let mut out: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Largest weak component left after deleting `removed`, by BFS.
pub fn giant_after_removal(adj: &[BTreeSet<usize>], removed: &[bool]) -> usize {
    let n = adj.len();
    let mut seen = removed.to_vec();
    let mut best = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// Mean absolute difference over all ordered pairs, halved and normalized
/// by the mean.
pub fn gini_double_sum(x: &[usize]) -> f64 {
    let n = x.len() as f64;
    let total: f64 = x.iter().map(|&v| v as f64).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut diff = 0.0;
    for &a in x {
        for &b in x {
            diff += (a as f64 - b as f64).abs();
        }
    }
    diff / (2.0 * n * total)
}

pub fn pearson(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = pairs.iter().map(|p| (p.1 - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

/// Degree assortativity as the Pearson correlation of endpoint degrees over
/// both orientations of every undirected edge.
pub fn degree_assortativity(adj: &[BTreeSet<usize>]) -> f64 {
    let mut pairs = Vec::new();
    for (u, nb) in adj.iter().enumerate() {
        for &v in nb {
            pairs.push((adj[u].len() as f64, adj[v].len() as f64));
        }
    }
    pearson(&pairs)
}

/// Ids of the documents in effect at `at`, and the typed edges among them
/// as id triples, by checking every node and edge independently.
pub fn active_at(g: &LegislationGraph, at: NaiveDate) -> (BTreeSet<String>, BTreeSet<(String, String, RefType)>) {
    let alive = |ix: usize| {
        let d = g.document(ix);
        d.date_of_effect <= at && at <= d.date_of_expiry
    };
    let nodes = (0..g.node_count()).filter(|&ix| alive(ix)).map(|ix| g.document(ix).id.to_string()).collect();
    let edges = g
        .edges()
        .filter(|&(s, t, _)| alive(s) && alive(t))
        .map(|(s, t, k)| (g.document(s).id.to_string(), g.document(t).id.to_string(), k))
        .collect();
    (nodes, edges)
}

/// Node ids and typed edge id triples of a graph.
pub fn id_sets(g: &LegislationGraph) -> (BTreeSet<String>, BTreeSet<(String, String, RefType)>) {
    let nodes = g.documents().iter().map(|d| d.id.to_string()).collect();
    let edges = g
        .edges()
        .map(|(s, t, k)| (g.document(s).id.to_string(), g.document(t).id.to_string(), k))
        .collect();
    (nodes, edges)
}

/// The star S_n: hub `D00000` cited by `n - 1` leaves.
pub fn star(n: usize) -> LegislationGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_document(LegalDocument::placeholder(doc_id(i), Sector::Legislation)).unwrap();
    }
    for i in 1..n {
        b.add_reference(&Reference::new(doc_id(i), doc_id(0), RefType::InstrumentsCited))
            .unwrap();
    }
    b.seal()
}

/// The path D0 - D1 - ... - D(n-1).
pub fn path(n: usize) -> LegislationGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_document(LegalDocument::placeholder(doc_id(i), Sector::Legislation)).unwrap();
    }
    for i in 1..n {
        b.add_reference(&Reference::new(doc_id(i), doc_id(i - 1), RefType::InstrumentsCited))
            .unwrap();
    }
    b.seal()
}
