//! Year-by-year evolution of the active network and the densification
//! power law `E(t) ∝ N(t)^a`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bowtie::core_gc_fractions;
use crate::filters::{snapshot, SnapshotSpec};
use crate::graph::{LegislationGraph, RefType, Sector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemporalError {
    #[error("{usable} usable points (N >= 2, E >= 1); at least 3 needed")]
    TooFewPoints { usable: usize },
    #[error("all usable points share the same node count")]
    ZeroVariance,
}

/// Counts for the network in effect on December 31 of `year`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotStat {
    pub year: i32,
    #[serde(rename = "N")]
    pub nodes: usize,
    #[serde(rename = "E")]
    pub edges: usize,
    pub per_sector: BTreeMap<Sector, usize>,
    pub per_reftype: BTreeMap<RefType, usize>,
    pub scc_fraction: f64,
    pub gc_fraction: f64,
}

impl SnapshotStat {
    pub fn of(year: i32, g: &LegislationGraph) -> Self {
        let mut per_sector: BTreeMap<Sector, usize> = Sector::ALL.iter().map(|&s| (s, 0)).collect();
        for d in g.documents() {
            *per_sector.get_mut(&d.sector).expect("all sectors present") += 1;
        }
        let mut per_reftype: BTreeMap<RefType, usize> = RefType::ALL.iter().map(|&r| (r, 0)).collect();
        for (_, _, k) in g.edges() {
            *per_reftype.get_mut(&k).expect("all kinds present") += 1;
        }
        let (scc_fraction, gc_fraction) = core_gc_fractions(g);
        SnapshotStat {
            year,
            nodes: g.node_count(),
            edges: g.edge_count(),
            per_sector,
            per_reftype,
            scc_fraction,
            gc_fraction,
        }
    }
}

/// One stat per year, ascending, each from the year-end snapshot.
pub fn evolution_series(g: &LegislationGraph, years: std::ops::RangeInclusive<i32>) -> Vec<SnapshotStat> {
    years
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|y| SnapshotStat::of(y, &snapshot(g, SnapshotSpec::year_end(y))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensificationFit {
    /// The densification exponent `a`.
    pub slope: f64,
    /// Intercept of the natural-log regression, `ln E = intercept + a ln N`.
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
    /// Points dropped because `N < 2` or `E = 0`.
    pub points_excluded: usize,
}

pub fn densification_fit(series: &[SnapshotStat]) -> Result<DensificationFit, TemporalError> {
    let pts: Vec<(f64, f64)> = series.iter().map(|s| (s.nodes as f64, s.edges as f64)).collect();
    densification_fit_points(&pts)
}

/// Ordinary least squares of `ln E` on `ln N` over `(N, E)` pairs.
pub fn densification_fit_points(points: &[(f64, f64)]) -> Result<DensificationFit, TemporalError> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, e)| n >= 2.0 && e >= 1.0)
        .map(|&(n, e)| (n.ln(), e.ln()))
        .collect();
    let k = usable.len();
    if k < 3 {
        return Err(TemporalError::TooFewPoints { usable: k });
    }
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / k as f64;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / k as f64;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * k as f64 * mx.abs().max(1.0) {
        return Err(TemporalError::ZeroVariance);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = usable.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = usable.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) };
    Ok(DensificationFit {
        slope,
        intercept,
        r_squared,
        points_used: k,
        points_excluded: points.len() - k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ingest_jsonl, IngestMode};

    #[test]
    fn exact_power_series() {
        let pts: Vec<(f64, f64)> = [10.0, 100.0, 1000.0, 10_000.0].iter().map(|&n: &f64| (n, n.powf(1.2))).collect();
        let f = densification_fit_points(&pts).unwrap();
        assert!((f.slope - 1.2).abs() < 1e-9);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let lin: Vec<(f64, f64)> = (1..=20).map(|i| (i as f64 * 50.0, i as f64 * 150.0)).collect();
        let f = densification_fit_points(&lin).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn exclusions_and_errors() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (5.0, 0.0), (10.0, 20.0), (20.0, 45.0), (40.0, 100.0)];
        let f = densification_fit_points(&pts).unwrap();
        assert_eq!((f.points_used, f.points_excluded), (3, 3));
        assert_eq!(
            densification_fit_points(&[(10.0, 2.0), (20.0, 5.0)]),
            Err(TemporalError::TooFewPoints { usable: 2 })
        );
        assert_eq!(
            densification_fit_points(&[(10.0, 2.0), (10.0, 5.0), (10.0, 7.0)]),
            Err(TemporalError::ZeroVariance)
        );
    }

    #[test]
    fn fig1_series() {
        let feed = concat!(
            r#"{"id":"370L0220","sector":3,"date_of_effect":"1970-03-20","date_of_expiry":"1989-07-17"}"#,
            "\n",
            r#"{"id":"383L0351","sector":3,"date_of_effect":"1983-06-16","references":[{"target":"370L0220","type":"amendment_to"}]}"#,
        );
        let g = ingest_jsonl(feed.as_bytes(), IngestMode::Strict).unwrap().0;
        let s = evolution_series(&g, 1969..=1971);
        assert_eq!(s.iter().map(|x| x.nodes).collect::<Vec<_>>(), [0, 1, 1]);
        assert_eq!(s[0].per_sector.values().sum::<usize>(), 0);
        assert_eq!(s[0].scc_fraction, 0.0);
        let s = evolution_series(&g, 1983..=1983);
        assert_eq!((s[0].nodes, s[0].edges), (2, 2));
        assert_eq!(s[0].per_sector[&Sector::Legislation], 2);
        assert_eq!(s[0].per_reftype[&RefType::AmendmentTo], 1);
        assert_eq!(s[0].per_reftype[&RefType::AmendedBy], 1);
        assert_eq!(s[0].scc_fraction, 1.0);
    }
}
