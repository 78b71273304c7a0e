//! Legislation networks: a temporal, multi-relational directed multigraph of
//! legal documents and the analyses run over it.
//!
//! The typical flow is ingest (or [`generator::generate`]) → sealed
//! [`LegislationGraph`] → sub-network selection in [`filters`] → any of the
//! analysis modules. All analyses take `&LegislationGraph` and are safe to
//! run concurrently on a shared sealed graph.

pub mod bowtie;
pub mod corpus;
pub mod filters;
pub mod generator;
pub mod graph;
pub mod metrics;
pub mod powerlaw;
pub mod random;
pub mod resilience;
pub mod seed;
pub mod temporal;
mod zeta;

use thiserror::Error;

pub use graph::{
    DocId, Direction, GraphBuilder, GraphError, LegalDocument, LegislationGraph, NodeIx, RefType,
    Reference, Scope, Sector, SimpleProjection, SENTINEL_EXPIRY,
};

/// Any module error, tagged with the module it came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph-core: {0}")]
    Graph(#[from] GraphError),
    #[error("corpus-io: {0}")]
    Corpus(#[from] corpus::CorpusError),
    #[error("generator: {0}")]
    Generator(#[from] generator::GeneratorError),
    #[error("structural-metrics: {0}")]
    Metrics(#[from] metrics::MetricsError),
    #[error("bowtie: {0}")]
    BowTie(#[from] bowtie::BowTieError),
    #[error("heavytail-fit: {0}")]
    Fit(#[from] powerlaw::FitError),
    #[error("random-models: {0}")]
    Random(#[from] random::RandomModelError),
    #[error("temporal-analysis: {0}")]
    Temporal(#[from] temporal::TemporalError),
    #[error("resilience: {0}")]
    Resilience(#[from] resilience::ResilienceError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
