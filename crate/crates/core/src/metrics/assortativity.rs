use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::graph::LegislationGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssortativityCriterion {
    /// Pearson correlation of projection degrees across edge endpoints.
    Degree,
    /// Attribute mixing coefficient over the sector mixing matrix.
    Sector,
}

/// Assortativity on the simple projection; every undirected edge
/// contributes both orientations.
pub fn assortativity(g: &LegislationGraph, criterion: AssortativityCriterion) -> Result<f64, MetricsError> {
    let p = g.projection();
    let m = p.edge_count();
    if m < 2 {
        return Err(MetricsError::TooFewEdges { edges: m });
    }
    match criterion {
        AssortativityCriterion::Degree => {
            // symmetric sums: x and y share mean and variance
            let (mut s1, mut s2, mut sxy) = (0.0f64, 0.0f64, 0.0f64);
            for (u, v) in p.edges() {
                let (a, b) = (p.degree(u) as f64, p.degree(v) as f64);
                s1 += a + b;
                s2 += a * a + b * b;
                sxy += 2.0 * a * b;
            }
            let len = 2.0 * m as f64;
            let mean = s1 / len;
            let var = s2 / len - mean * mean;
            if var <= 1e-12 * mean.max(1.0).powi(2) {
                return Err(MetricsError::ZeroVariance("all edge endpoints have equal degree"));
            }
            Ok((sxy / len - mean * mean) / var)
        }
        AssortativityCriterion::Sector => {
            let mut e = [[0.0f64; 6]; 6];
            for (u, v) in p.edges() {
                let a = g.document(u).sector.index();
                let b = g.document(v).sector.index();
                e[a][b] += 1.0;
                e[b][a] += 1.0;
            }
            let len = 2.0 * m as f64;
            let trace: f64 = (0..6).map(|i| e[i][i] / len).sum();
            let ab: f64 = (0..6)
                .map(|i| {
                    let a: f64 = e[i].iter().sum::<f64>() / len;
                    let b: f64 = (0..6).map(|j| e[j][i]).sum::<f64>() / len;
                    a * b
                })
                .sum();
            if (1.0 - ab).abs() < 1e-12 {
                return Err(MetricsError::ZeroVariance("every edge endpoint has the same sector"));
            }
            Ok((trace - ab) / (1.0 - ab))
        }
    }
}
