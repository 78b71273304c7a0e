//! Error and attack tolerance: progressive node removal while tracking the
//! largest weak component.
//!
//! Each run fixes a removal order first, then replays it backwards with a
//! union-find, adding nodes back one at a time. The giant-component size
//! after every removal step falls out of that single pass.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::LegislationGraph;
use crate::random::erdos_renyi;
use crate::seed::{derive_seed, rng_for};

pub const MIN_NODES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResilienceError {
    #[error("graph has {nodes} nodes; at least {MIN_NODES} needed")]
    TooSmall { nodes: usize },
    #[error("step fraction {0} outside (0, 1)")]
    BadStep(f64),
    #[error("stop fraction {0} outside (0, 1]")]
    BadStop(f64),
    #[error("at least one repetition is required")]
    NoRepetitions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Random,
    TargetedByDegree,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::TargetedByDegree => "targeted_by_degree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMode {
    /// Order once by the degrees of the intact graph.
    StaticInitial,
    /// Re-rank the survivors by their current degree before every step.
    AdaptiveRecompute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResilienceConfig {
    pub strategy: Strategy,
    /// Share of the remaining nodes removed per step.
    pub step_fraction: f64,
    pub repetitions: usize,
    pub degree_mode: DegreeMode,
    pub seed: u64,
    /// Stop once this share of the original nodes is gone.
    pub stop_at: f64,
}

impl ResilienceConfig {
    pub fn random(seed: u64) -> Self {
        ResilienceConfig {
            strategy: Strategy::Random,
            step_fraction: 0.05,
            repetitions: 1000,
            degree_mode: DegreeMode::StaticInitial,
            seed,
            stop_at: 0.99,
        }
    }

    pub fn targeted(seed: u64) -> Self {
        ResilienceConfig { strategy: Strategy::TargetedByDegree, repetitions: 1, ..Self::random(seed) }
    }

    fn validate(&self) -> Result<(), ResilienceError> {
        if !(self.step_fraction > 0.0 && self.step_fraction < 1.0) {
            return Err(ResilienceError::BadStep(self.step_fraction));
        }
        if !(self.stop_at > 0.0 && self.stop_at <= 1.0) {
            return Err(ResilienceError::BadStop(self.stop_at));
        }
        if self.repetitions == 0 {
            return Err(ResilienceError::NoRepetitions);
        }
        Ok(())
    }
}

impl Default for ResilienceConfig {
    fn default() -> Self {
        Self::random(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResiliencePoint {
    pub removed: usize,
    pub fraction_removed: f64,
    pub gc_fraction_of_remaining: f64,
    pub gc_fraction_of_original: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResilienceCurve {
    pub strategy: Strategy,
    pub points: Vec<ResiliencePoint>,
    pub averaged_over: usize,
}

impl ResilienceCurve {
    /// Trapezoidal area under `gc_fraction_of_original` against the removed
    /// fraction.
    pub fn area_under_curve(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| {
                (w[1].fraction_removed - w[0].fraction_removed)
                    * (w[0].gc_fraction_of_original + w[1].gc_fraction_of_original)
                    / 2.0
            })
            .sum()
    }

    /// Largest pointwise difference in `gc_fraction_of_original` over the
    /// shared removal grid.
    pub fn max_gap(&self, other: &ResilienceCurve) -> f64 {
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (a.gc_fraction_of_original - b.gc_fraction_of_original).abs())
            .fold(0.0, f64::max)
    }
}

/// Cumulative removal counts at each step boundary, starting with 0.
pub fn step_boundaries(n: usize, step_fraction: f64, stop_at: f64) -> Vec<usize> {
    let mut out = vec![0];
    let mut removed = 0usize;
    while removed < n && (removed as f64) < stop_at * n as f64 {
        let remaining = n - removed;
        let k = ((step_fraction * remaining as f64).ceil() as usize).clamp(1, remaining);
        removed += k;
        out.push(removed);
    }
    out
}

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return self.size[a];
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.size[a]
    }
}

/// Giant weak component size when the first `b` nodes of `order` are gone,
/// for every `b` in `boundaries`.
fn gc_sizes(g: &LegislationGraph, order: &[usize], boundaries: &[usize]) -> Vec<usize> {
    let n = g.node_count();
    let proj = g.projection();
    let mut present = vec![false; n];
    let mut dsu = Dsu::new(n);
    let mut best = 0usize;
    let mut out = vec![0; boundaries.len()];
    let mut next = boundaries.len();
    // boundaries ascend; walk them from the back while re-adding nodes
    for pos in (0..=n).rev() {
        while next > 0 && boundaries[next - 1] == pos {
            next -= 1;
            out[next] = best;
        }
        if pos == 0 {
            break;
        }
        let v = order[pos - 1];
        present[v] = true;
        best = best.max(1);
        for &u in proj.neighbors(v) {
            if present[u] {
                best = best.max(dsu.union(u, v));
            }
        }
    }
    out
}

fn static_order(g: &LegislationGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    // stable sort keeps index (= id) order among equal degrees
    order.sort_by_key(|&v| std::cmp::Reverse(g.total_degree(v)));
    order
}

fn adaptive_order(g: &LegislationGraph, boundaries: &[usize]) -> Vec<usize> {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.total_degree(v)).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for w in boundaries.windows(2) {
        let k = w[1] - w[0];
        alive.retain(|&v| !removed[v]);
        alive.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
        for &v in &alive[..k] {
            removed[v] = true;
            order.push(v);
        }
        for &v in &order[w[0]..w[1]] {
            for &u in g.successors(v).iter().chain(g.predecessors(v)) {
                degree[u] -= 1;
            }
        }
    }
    order.extend((0..n).filter(|&v| !removed[v]));
    order
}

fn curve_from_sizes(n: usize, boundaries: &[usize], sizes: &[f64], strategy: Strategy, reps: usize) -> ResilienceCurve {
    let points = boundaries
        .iter()
        .zip(sizes)
        .map(|(&b, &gc)| ResiliencePoint {
            removed: b,
            fraction_removed: b as f64 / n as f64,
            gc_fraction_of_remaining: if b == n { 0.0 } else { gc / (n - b) as f64 },
            gc_fraction_of_original: gc / n as f64,
        })
        .collect();
    ResilienceCurve { strategy, points, averaged_over: reps }
}

/// Runs the removal protocol on `g`. Random curves are the pointwise mean
/// over `repetitions` runs; repetition `r` draws from its own stream
/// derived from `(seed, r)`. Targeted removal is deterministic and runs
/// once.
pub fn simulate(g: &LegislationGraph, config: &ResilienceConfig) -> Result<ResilienceCurve, ResilienceError> {
    config.validate()?;
    let n = g.node_count();
    if n < MIN_NODES {
        return Err(ResilienceError::TooSmall { nodes: n });
    }
    let boundaries = step_boundaries(n, config.step_fraction, config.stop_at);
    match config.strategy {
        Strategy::TargetedByDegree => {
            let order = match config.degree_mode {
                DegreeMode::StaticInitial => static_order(g),
                DegreeMode::AdaptiveRecompute => adaptive_order(g, &boundaries),
            };
            let sizes: Vec<f64> = gc_sizes(g, &order, &boundaries).into_iter().map(|s| s as f64).collect();
            Ok(curve_from_sizes(n, &boundaries, &sizes, config.strategy, 1))
        }
        Strategy::Random => {
            g.projection();
            let reps = config.repetitions;
            let totals = (0..reps)
                .into_par_iter()
                .map_init(
                    || (0..n).collect::<Vec<usize>>(),
                    |order, r| {
                        let mut rng = rng_for(config.seed, "resilience-random", r as u64);
                        order.sort_unstable();
                        order.shuffle(&mut rng);
                        gc_sizes(g, order, &boundaries)
                    },
                )
                .reduce(
                    || vec![0usize; boundaries.len()],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                        a
                    },
                );
            let sizes: Vec<f64> = totals.into_iter().map(|t| t as f64 / reps as f64).collect();
            Ok(curve_from_sizes(n, &boundaries, &sizes, config.strategy, reps))
        }
    }
}

/// The curve for `g` and for an Erdős–Rényi graph with the same node and
/// edge counts, under the same protocol.
pub fn compare_with_null(
    g: &LegislationGraph,
    config: &ResilienceConfig,
) -> Result<(ResilienceCurve, ResilienceCurve), ResilienceError> {
    let on_graph = simulate(g, config)?;
    let null = erdos_renyi(g.node_count(), g.edge_count(), derive_seed(config.seed, "resilience-null", 0))
        .expect("a simple graph's edge count fits its own node count");
    Ok((on_graph, simulate(&null, config)?))
}
