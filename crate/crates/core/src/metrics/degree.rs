use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::graph::{Direction, LegislationGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub direction: Direction,
    pub n: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub stddev: f64,
    pub max: usize,
    pub histogram: BTreeMap<usize, usize>,
}

pub fn degree_stats(g: &LegislationGraph, direction: Direction) -> Result<DegreeStats, MetricsError> {
    if g.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    let degrees = g.degrees(direction);
    let n = degrees.len();
    let mut histogram = BTreeMap::new();
    for &k in &degrees {
        *histogram.entry(k).or_insert(0) += 1;
    }
    let sum: usize = degrees.iter().sum();
    let mean = sum as f64 / n as f64;
    let var = degrees.iter().map(|&k| (k as f64 - mean).powi(2)).sum::<f64>() / n as f64;
    Ok(DegreeStats {
        direction,
        n,
        mean,
        stddev: var.sqrt(),
        max: degrees.iter().copied().max().unwrap_or(0),
        histogram,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorenzGini {
    /// `(cumulative node fraction, cumulative degree fraction)` over degrees
    /// sorted ascending, from (0, 0) to (1, 1).
    pub lorenz_points: Vec<(f64, f64)>,
    pub gini: f64,
    /// Share of all links held by the top 1% highest-degree nodes.
    pub top1_share: f64,
    /// Smallest fraction of highest-degree nodes holding at least 80% of links.
    pub pareto80_node_fraction: f64,
    /// Set when every degree is zero; gini is then reported as 0.
    pub all_zero: bool,
}

impl LorenzGini {
    /// At most `k + 1` Lorenz points, evenly spaced in node fraction.
    pub fn resampled(&self, k: usize) -> Vec<(f64, f64)> {
        let n = self.lorenz_points.len() - 1;
        if n <= k {
            return self.lorenz_points.clone();
        }
        (0..=k).map(|i| self.lorenz_points[i * n / k]).collect()
    }
}

pub fn lorenz_gini(g: &LegislationGraph, direction: Direction) -> Result<LorenzGini, MetricsError> {
    lorenz_gini_of(&g.degrees(direction))
}

/// Lorenz curve and Gini coefficient of a degree sequence.
///
/// The Gini coefficient uses the sorted form
/// `G = 2 Σ i·x_(i) / (n Σ x) − (n + 1)/n` evaluated over integers, so equal
/// degrees give exactly zero.
pub fn lorenz_gini_of(degrees: &[usize]) -> Result<LorenzGini, MetricsError> {
    if degrees.is_empty() {
        return Err(MetricsError::EmptyGraph);
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    let total: u128 = sorted.iter().map(|&x| x as u128).sum();

    if total == 0 {
        let lorenz_points = (0..=n).map(|i| (i as f64 / n as f64, i as f64 / n as f64)).collect();
        return Ok(LorenzGini {
            lorenz_points,
            gini: 0.0,
            top1_share: 0.0,
            pareto80_node_fraction: 0.0,
            all_zero: true,
        });
    }

    let weighted: u128 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (i as u128 + 1) * x as u128)
        .sum();
    let n128 = n as u128;
    // G = (2·W·n − (n+1)·n·T) / (n·T·n)
    let num = (2 * weighted * n128) as i128 - ((n128 + 1) * n128 * total) as i128;
    let den = n128 * total * n128;
    let gini = num as f64 / den as f64;

    let mut lorenz_points = Vec::with_capacity(n + 1);
    lorenz_points.push((0.0, 0.0));
    let mut cum: u128 = 0;
    for (i, &x) in sorted.iter().enumerate() {
        cum += x as u128;
        lorenz_points.push(((i + 1) as f64 / n as f64, cum as f64 / total as f64));
    }

    let top = n.div_ceil(100).max(1);
    let top_sum: u128 = sorted.iter().rev().take(top).map(|&x| x as u128).sum();
    let top1_share = top_sum as f64 / total as f64;

    let mut acc: u128 = 0;
    let mut k = 0;
    for &x in sorted.iter().rev() {
        acc += x as u128;
        k += 1;
        // acc / total >= 0.8, in integers
        if acc * 5 >= total * 4 {
            break;
        }
    }

    Ok(LorenzGini {
        lorenz_points,
        gini,
        top1_share,
        pareto80_node_fraction: k as f64 / n as f64,
        all_zero: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DocId, GraphBuilder, LegalDocument, RefType, Reference, Sector};

    fn graph(n: usize, edges: &[(usize, usize)]) -> LegislationGraph {
        let mut b = GraphBuilder::new();
        for i in 0..n {
            b.add_document(
                LegalDocument::new(DocId::new(format!("N{i:03}")).unwrap(), Sector::Legislation, "2000-01-01".parse().unwrap(), None)
                    .unwrap(),
            )
            .unwrap();
        }
        for &(s, t) in edges {
            b.add_reference(&Reference::new(
                DocId::new(format!("N{s:03}")).unwrap(),
                DocId::new(format!("N{t:03}")).unwrap(),
                RefType::InstrumentsCited,
            ))
            .unwrap();
        }
        b.seal()
    }

    #[test]
    fn cycle_stats() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let s = degree_stats(&g, Direction::In).unwrap();
        assert_eq!((s.mean, s.stddev, s.max), (1.0, 0.0, 1));
        assert_eq!(s.histogram.values().sum::<usize>(), 3);
    }

    #[test]
    fn star_stats() {
        let edges: Vec<_> = (1..10).map(|i| (i, 0)).collect();
        let g = graph(10, &edges);
        let s = degree_stats(&g, Direction::In).unwrap();
        assert_eq!(s.max, 9);
        assert!((s.mean - 0.9).abs() < 1e-12);
        assert_eq!(degree_stats(&LegislationGraph::default(), Direction::In), Err(MetricsError::EmptyGraph));
    }

    #[test]
    fn gini_reference_values() {
        assert_eq!(lorenz_gini_of(&[0, 0, 0, 10]).unwrap().gini, 0.75);
        let eq = lorenz_gini_of(&[7; 13]).unwrap();
        assert_eq!(eq.gini, 0.0);
        for (i, &(x, y)) in eq.lorenz_points.iter().enumerate() {
            assert!((x - y).abs() < 1e-12, "point {i}");
        }
        let z = lorenz_gini_of(&[0, 0, 0]).unwrap();
        assert!(z.all_zero);
        assert_eq!(z.gini, 0.0);
    }

    #[test]
    fn top_share_and_pareto() {
        // 100 nodes: one holds 50 links, the rest 1 each (149 total)
        let mut d = vec![1usize; 99];
        d.push(50);
        let lg = lorenz_gini_of(&d).unwrap();
        assert!((lg.top1_share - 50.0 / 149.0).abs() < 1e-12);
        // need 0.8 * 149 = 119.2 links: hub + 70 ones = 120
        assert!((lg.pareto80_node_fraction - 0.71).abs() < 1e-12);
        assert_eq!(lg.lorenz_points.first(), Some(&(0.0, 0.0)));
        assert_eq!(lg.lorenz_points.last(), Some(&(1.0, 1.0)));
        assert_eq!(lg.resampled(10).len(), 11);
    }
}
