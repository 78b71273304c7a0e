//! Synthetic legislation corpora.
//!
//! Documents arrive year by year. Each new document cites earlier documents
//! only; amendments additionally create the reverse `AmendedBy` edge, which
//! is the one forward-in-time edge kind. Citation targets are drawn by a
//! mixture of preferential attachment (weight in-degree + 1), uniform choice
//! and copying a reference of an already-chosen target. The number of
//! citations per document is set so that the cumulative edge count tracks
//! `citations_per_doc * N^densification_exponent`.

use chrono::{Datelike, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DocId, GraphBuilder, LegalDocument, LegislationGraph, RefType, Sector};
use crate::seed::rng_for;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error(
        "infeasible schedule: first year requests {requested} citations but only {available} backward pairs exist"
    )]
    Infeasible { requested: u64, available: u64 },
}

/// Documents added per year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocsSchedule {
    Constant(u32),
    /// `initial * (1 + rate)^t` rounded, for year offset `t`.
    Growth { initial: u32, rate: f64 },
    /// One entry per year of the range.
    Explicit(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub start_year: i32,
    pub end_year: i32,
    pub docs_per_year: DocsSchedule,
    /// Scale of the edge target `citations_per_doc * N^exponent`.
    pub citations_per_doc: f64,
    pub densification_exponent: f64,
    /// Probability that a base draw is preferential rather than uniform.
    pub preferential_mixing: f64,
    /// Probability that a citation copies a reference of an already-chosen target.
    pub triadic_closure: f64,
    pub sector_weights: [f64; 6],
    /// Weights in `RefType::ALL` order; both amendment entries draw an amendment pair.
    pub reftype_weights: [f64; 6],
    pub sunset_probability: f64,
    pub sunset_horizon_years: u32,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            start_year: 1951,
            end_year: 2013,
            docs_per_year: DocsSchedule::Constant(100),
            citations_per_doc: 3.0,
            densification_exponent: 1.1,
            preferential_mixing: 0.8,
            triadic_closure: 0.5,
            sector_weights: [8652.0, 8564.0, 120550.0, 1231.0, 73123.0, 37570.0],
            reftype_weights: [9.5, 9.5, 23.5, 54.93, 2.0, 0.57],
            sunset_probability: 0.3,
            sunset_horizon_years: 20,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        self.start_year..=self.end_year
    }

    /// Documents added in each year of the range.
    pub fn schedule(&self) -> Vec<u64> {
        let years = (self.end_year - self.start_year + 1).max(0) as usize;
        match &self.docs_per_year {
            DocsSchedule::Constant(d) => vec![u64::from(*d); years],
            DocsSchedule::Growth { initial, rate } => (0..years)
                .map(|t| (f64::from(*initial) * (1.0 + rate).powi(t as i32)).round() as u64)
                .collect(),
            DocsSchedule::Explicit(v) => v.iter().map(|&d| u64::from(d)).collect(),
        }
    }

    /// Cumulative typed-edge target after `n` documents.
    pub fn edge_target(&self, n: u64) -> u64 {
        (self.citations_per_doc * (n as f64).powf(self.densification_exponent)).floor() as u64
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |m: &str| Err(GeneratorError::InvalidConfig(m.to_owned()));
        if self.end_year < self.start_year {
            return bad("end_year precedes start_year");
        }
        let years = (self.end_year - self.start_year + 1) as usize;
        match &self.docs_per_year {
            DocsSchedule::Constant(0) => return bad("docs_per_year must be positive"),
            DocsSchedule::Growth { initial, rate } => {
                if *initial == 0 || !rate.is_finite() || *rate <= -1.0 {
                    return bad("growth schedule needs initial > 0 and rate > -1");
                }
            }
            DocsSchedule::Explicit(v) => {
                if v.len() != years {
                    return bad("explicit schedule length must equal the number of years");
                }
                if v.contains(&0) {
                    return bad("docs_per_year must be positive");
                }
            }
            DocsSchedule::Constant(_) => {}
        }
        if !(1.0..=2.0).contains(&self.densification_exponent) {
            return bad("densification_exponent must lie in [1, 2]");
        }
        if !(self.citations_per_doc.is_finite() && self.citations_per_doc >= 0.0) {
            return bad("citations_per_doc must be finite and non-negative");
        }
        for (name, p) in [
            ("preferential_mixing", self.preferential_mixing),
            ("triadic_closure", self.triadic_closure),
            ("sunset_probability", self.sunset_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(GeneratorError::InvalidConfig(format!("{name} must lie in [0, 1]")));
            }
        }
        for (name, w) in [("sector_weights", &self.sector_weights), ("reftype_weights", &self.reftype_weights)] {
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) || w.iter().sum::<f64>() <= 0.0 {
                return Err(GeneratorError::InvalidConfig(format!(
                    "{name} must be non-negative and not all zero"
                )));
            }
        }
        if self.sunset_horizon_years == 0 {
            return bad("sunset_horizon_years must be positive");
        }
        let first = self.schedule()[0];
        let requested = self.edge_target(first);
        let available = first * (first - 1) / 2;
        if requested > available {
            return Err(GeneratorError::Infeasible { requested, available });
        }
        Ok(())
    }
}

const SECTOR_LETTERS: [char; 6] = ['T', 'A', 'L', 'K', 'P', 'J'];

fn add_years(date: NaiveDate, years: i32) -> NaiveDate {
    let y = date.year() + years;
    date.with_year(y)
        .or_else(|| NaiveDate::from_ymd_opt(y, 2, 28))
        .expect("valid date")
}

pub fn generate(config: &GeneratorConfig) -> Result<LegislationGraph, GeneratorError> {
    config.validate()?;
    let mut rng = rng_for(config.seed, "generator", 0);
    let sectors = WeightedIndex::new(config.sector_weights).expect("validated weights");
    let kinds = WeightedIndex::new(config.reftype_weights).expect("validated weights");

    let total: u64 = config.schedule().iter().sum();
    let mut b = GraphBuilder::new();
    // urn holding each node once plus once per received edge
    let mut urn: Vec<usize> = Vec::with_capacity(total as usize * 4);
    let mut cites: Vec<Vec<usize>> = Vec::with_capacity(total as usize);
    let mut stamp: Vec<usize> = Vec::with_capacity(total as usize);
    let mut edges: u64 = 0;

    for (year, &count) in config.years().zip(config.schedule().iter()) {
        let start = NaiveDate::from_ymd_opt(year, 1, 1).expect("valid year");
        let days = NaiveDate::from_ymd_opt(year, 12, 31).expect("valid year").ordinal0();
        let mut offsets: Vec<u32> = (0..count).map(|_| rng.random_range(0..=days)).collect();
        offsets.sort_unstable();

        for (seq, offset) in offsets.into_iter().enumerate() {
            let sector = Sector::ALL[sectors.sample(&mut rng)];
            let effect = start + chrono::Days::new(u64::from(offset));
            let expiry = (rng.random::<f64>() < config.sunset_probability).then(|| {
                add_years(effect, rng.random_range(1..=config.sunset_horizon_years) as i32)
            });
            let id = format!(
                "{}{}{}{:05}",
                sector.code(),
                year,
                SECTOR_LETTERS[sector.index()],
                seq + 1
            );
            let doc = LegalDocument::new(DocId::new(id).expect("non-empty"), sector, effect, expiry)
                .expect("expiry after effect");
            b.add_document(doc).expect("generated ids are unique");

            let me = cites.len();
            cites.push(Vec::new());
            stamp.push(usize::MAX);
            urn.push(me);

            let target = config.edge_target(me as u64 + 1);
            let mut chosen: Vec<usize> = Vec::new();
            while edges < target && chosen.len() < me {
                let t = pick_target(&mut rng, config, me, &chosen, &cites, &urn, &stamp);
                stamp[t] = me;
                chosen.push(t);
                cites[me].push(t);
                let kind = RefType::ALL[kinds.sample(&mut rng)];
                if kind.reciprocal().is_some() {
                    b.push_edge(me, t, RefType::AmendmentTo);
                    b.push_edge(t, me, RefType::AmendedBy);
                    urn.push(t);
                    urn.push(me);
                    edges += 2;
                } else {
                    b.push_edge(me, t, kind);
                    urn.push(t);
                    edges += 1;
                }
            }
        }
    }
    Ok(b.seal())
}

/// Chooses an earlier document (index < `me`) not yet cited by `me`.
fn pick_target(
    rng: &mut impl rand::Rng,
    config: &GeneratorConfig,
    me: usize,
    chosen: &[usize],
    cites: &[Vec<usize>],
    urn: &[usize],
    stamp: &[usize],
) -> usize {
    let fresh = |t: usize| t < me && stamp[t] != me;
    for _ in 0..32 {
        if !chosen.is_empty() && rng.random::<f64>() < config.triadic_closure {
            let via = chosen[rng.random_range(0..chosen.len())];
            let refs = &cites[via];
            if !refs.is_empty() {
                let t = refs[rng.random_range(0..refs.len())];
                if fresh(t) {
                    return t;
                }
            }
            continue;
        }
        let t = if rng.random::<f64>() < config.preferential_mixing {
            urn[rng.random_range(0..urn.len())]
        } else {
            rng.random_range(0..me)
        };
        if fresh(t) {
            return t;
        }
    }
    // dense corner: scan from a random start
    let start = rng.random_range(0..me);
    (0..me)
        .map(|i| (start + i) % me)
        .find(|&t| fresh(t))
        .expect("caller guarantees an unchosen target exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{export, write_jsonl};

    fn small(seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            start_year: 1990,
            end_year: 1999,
            docs_per_year: DocsSchedule::Constant(50),
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let dump = |c: &GeneratorConfig| {
            let mut buf = Vec::new();
            write_jsonl(&mut buf, &export(&generate(c).unwrap())).unwrap();
            buf
        };
        assert_eq!(dump(&small(42)), dump(&small(42)));
        assert_ne!(dump(&small(42)), dump(&small(43)));
    }

    #[test]
    fn node_count_follows_schedule_and_edges_track_target() {
        let c = GeneratorConfig {
            docs_per_year: DocsSchedule::Growth { initial: 40, rate: 0.05 },
            ..small(1)
        };
        let g = generate(&c).unwrap();
        let n: u64 = c.schedule().iter().sum();
        assert_eq!(g.node_count() as u64, n);
        let target = c.edge_target(n);
        let e = g.edge_count() as u64;
        assert!(e >= target && e <= target + 1, "edges {e} target {target}");
    }

    #[test]
    fn citations_point_backward() {
        let g = generate(&small(7)).unwrap();
        for (s, t, k) in g.edges() {
            let (ds, dt) = (g.document(s), g.document(t));
            if k == RefType::AmendedBy {
                assert!(g.out_edges(t).any(|(x, kk)| x == s && kk == RefType::AmendmentTo));
            } else {
                assert!(dt.date_of_effect <= ds.date_of_effect, "{} -> {}", ds.id, dt.id);
            }
        }
    }

    #[test]
    fn sunset_dates() {
        let c = GeneratorConfig { sunset_probability: 1.0, sunset_horizon_years: 3, ..small(3) };
        let g = generate(&c).unwrap();
        for d in g.documents() {
            let years = d.date_of_expiry.year() - d.date_of_effect.year();
            assert!((1..=3).contains(&years));
        }
        let none = generate(&GeneratorConfig { sunset_probability: 0.0, ..small(3) }).unwrap();
        assert!(none.documents().iter().all(|d| !d.has_sunset()));
    }

    #[test]
    fn config_validation() {
        let c = GeneratorConfig { densification_exponent: 2.5, ..small(0) };
        assert!(matches!(generate(&c), Err(GeneratorError::InvalidConfig(_))));
        let c = GeneratorConfig { sector_weights: [0.0; 6], ..small(0) };
        assert!(matches!(generate(&c), Err(GeneratorError::InvalidConfig(_))));
        let c = GeneratorConfig {
            docs_per_year: DocsSchedule::Constant(4),
            citations_per_doc: 5.0,
            ..small(0)
        };
        assert!(matches!(generate(&c), Err(GeneratorError::Infeasible { .. })));
        let c = GeneratorConfig { docs_per_year: DocsSchedule::Explicit(vec![5; 3]), ..small(0) };
        assert!(matches!(generate(&c), Err(GeneratorError::InvalidConfig(_))));
    }
}
