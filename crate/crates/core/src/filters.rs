//! Sub-network extraction: by sector, by reference type, and point-in-time
//! snapshots of the legislation in effect.

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{LegislationGraph, RefType, Sector};

/// A query instant for [`snapshot`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotSpec {
    pub at: NaiveDate,
}

impl SnapshotSpec {
    pub fn at(at: NaiveDate) -> Self {
        SnapshotSpec { at }
    }

    /// December 31 of `year`.
    pub fn year_end(year: i32) -> Self {
        SnapshotSpec {
            at: NaiveDate::from_ymd_opt(year, 12, 31).expect("valid year"),
        }
    }
}

/// Documents of sector `s` and the edges between them.
pub fn filter_sector(g: &LegislationGraph, s: Sector) -> LegislationGraph {
    let keep: Vec<bool> = g.documents().iter().map(|d| d.sector == s).collect();
    g.induced(&keep, |_| true)
}

/// Every document, only the edges of kind `r`.
pub fn filter_reftype(g: &LegislationGraph, r: RefType) -> LegislationGraph {
    g.induced(&vec![true; g.node_count()], |k| k == r)
}

/// Documents in effect at `spec.at` (effect <= at <= expiry); an edge
/// survives only if both of its endpoints do.
pub fn snapshot(g: &LegislationGraph, spec: SnapshotSpec) -> LegislationGraph {
    let keep: Vec<bool> = g.documents().iter().map(|d| d.is_active_at(spec.at)).collect();
    g.induced(&keep, |_| true)
}

/// One year-end snapshot per year, ascending.
pub fn annual_series(
    g: &LegislationGraph,
    years: std::ops::RangeInclusive<i32>,
) -> Vec<(i32, LegislationGraph)> {
    years
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|y| (y, snapshot(g, SnapshotSpec::year_end(y))))
        .collect()
}

/// The four named networks: the whole legislation network, the sector-3
/// regulations network, and the instruments-cited and legal-basis
/// relation networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SubNetwork {
    Ln,
    Rn,
    Icn,
    Lbn,
}

impl SubNetwork {
    pub const ALL: [SubNetwork; 4] = [SubNetwork::Ln, SubNetwork::Rn, SubNetwork::Icn, SubNetwork::Lbn];

    pub fn label(self) -> &'static str {
        match self {
            SubNetwork::Ln => "LN",
            SubNetwork::Rn => "RN",
            SubNetwork::Icn => "ICN",
            SubNetwork::Lbn => "LBN",
        }
    }

    pub fn apply(self, g: &LegislationGraph) -> LegislationGraph {
        match self {
            SubNetwork::Ln => g.clone(),
            SubNetwork::Rn => filter_sector(g, Sector::Legislation),
            SubNetwork::Icn => filter_reftype(g, RefType::InstrumentsCited),
            SubNetwork::Lbn => filter_reftype(g, RefType::LegalBasis),
        }
    }
}

impl std::str::FromStr for SubNetwork {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SubNetwork::ALL
            .into_iter()
            .find(|n| n.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown sub-network {s:?} (expected LN, RN, ICN or LBN)"))
    }
}
