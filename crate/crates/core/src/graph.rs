//! The legislation multigraph: typed, directed, temporally annotated.
//!
//! Construction happens through [`GraphBuilder`]; [`GraphBuilder::seal`]
//! produces an immutable [`LegislationGraph`] that every analysis reads.
//! Sealed graphs keep their documents sorted by identifier, so node indices
//! double as a deterministic tie-break order.

use std::collections::HashMap;
use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a node inside a sealed graph.
pub type NodeIx = usize;

/// Expiry assigned to documents without a sunset clause.
pub const SENTINEL_EXPIRY: NaiveDate = match NaiveDate::from_ymd_opt(9999, 12, 31) {
    Some(d) => d,
    None => panic!("sentinel date out of range"),
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("document id must be non-empty")]
    EmptyId,
    #[error("duplicate document id {0}")]
    DuplicateId(String),
    #[error("document {id}: date of effect {effect} is after date of expiry {expiry}")]
    InvertedInterval {
        id: String,
        effect: NaiveDate,
        expiry: NaiveDate,
    },
    #[error("self-referencing edge on {0}")]
    SelfLoop(String),
    #[error("reference {source_id} -> {target}: unknown document {missing}")]
    MissingEndpoint {
        source_id: String,
        target: String,
        missing: String,
    },
    #[error("unknown document {0}")]
    UnknownId(String),
    #[error("sector code {0} outside 1..=6")]
    InvalidSector(u8),
    #[error("unknown reference type {0:?}")]
    InvalidRefType(String),
}

/// Opaque CELEX-style document identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DocId(String);

impl DocId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty() {
            return Err(GraphError::EmptyId);
        }
        Ok(DocId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for DocId {
    type Error = GraphError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        DocId::new(value)
    }
}

impl From<DocId> for String {
    fn from(id: DocId) -> Self {
        id.0
    }
}

impl std::borrow::Borrow<str> for DocId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for DocId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Top-level document sector, carried as integer codes 1..=6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Sector {
    Treaties = 1,
    InternationalAgreements = 2,
    Legislation = 3,
    ComplementaryLegislation = 4,
    PreparatoryActs = 5,
    Jurisprudence = 6,
}

impl Sector {
    pub const ALL: [Sector; 6] = [
        Sector::Treaties,
        Sector::InternationalAgreements,
        Sector::Legislation,
        Sector::ComplementaryLegislation,
        Sector::PreparatoryActs,
        Sector::Jurisprudence,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self, GraphError> {
        match code {
            1..=6 => Ok(Sector::ALL[usize::from(code) - 1]),
            other => Err(GraphError::InvalidSector(other)),
        }
    }

    /// Position in [`Sector::ALL`].
    pub fn index(self) -> usize {
        self as usize - 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::Treaties => "treaties",
            Sector::InternationalAgreements => "international_agreements",
            Sector::Legislation => "legislation",
            Sector::ComplementaryLegislation => "complementary_legislation",
            Sector::PreparatoryActs => "preparatory_acts",
            Sector::Jurisprudence => "jurisprudence",
        }
    }
}

impl TryFrom<u8> for Sector {
    type Error = GraphError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Sector::from_code(value)
    }
}

impl From<Sector> for u8 {
    fn from(s: Sector) -> Self {
        s.code()
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Semantic label of a cross-reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefType {
    AmendedBy,
    AmendmentTo,
    LegalBasis,
    InstrumentsCited,
    AffectedByCase,
    Other,
}

impl RefType {
    pub const ALL: [RefType; 6] = [
        RefType::AmendedBy,
        RefType::AmendmentTo,
        RefType::LegalBasis,
        RefType::InstrumentsCited,
        RefType::AffectedByCase,
        RefType::Other,
    ];

    pub fn token(self) -> &'static str {
        match self {
            RefType::AmendedBy => "amended_by",
            RefType::AmendmentTo => "amendment_to",
            RefType::LegalBasis => "legal_basis",
            RefType::InstrumentsCited => "instruments_cited",
            RefType::AffectedByCase => "affected_by_case",
            RefType::Other => "other",
        }
    }

    pub fn from_token(token: &str) -> Result<Self, GraphError> {
        RefType::ALL
            .into_iter()
            .find(|r| r.token() == token)
            .ok_or_else(|| GraphError::InvalidRefType(token.to_owned()))
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The opposite direction of a bidirectional amendment, if this is one.
    pub fn reciprocal(self) -> Option<RefType> {
        match self {
            RefType::AmendedBy => Some(RefType::AmendmentTo),
            RefType::AmendmentTo => Some(RefType::AmendedBy),
            _ => None,
        }
    }
}

impl fmt::Display for RefType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LegalDocument {
    pub id: DocId,
    pub sector: Sector,
    pub date_of_effect: NaiveDate,
    pub date_of_expiry: NaiveDate,
}

impl LegalDocument {
    pub fn new(
        id: DocId,
        sector: Sector,
        date_of_effect: NaiveDate,
        date_of_expiry: Option<NaiveDate>,
    ) -> Result<Self, GraphError> {
        let doc = LegalDocument {
            id,
            sector,
            date_of_effect,
            date_of_expiry: date_of_expiry.unwrap_or(SENTINEL_EXPIRY),
        };
        doc.validate()?;
        Ok(doc)
    }

    /// A document with no real dates: in effect from 0001-01-01 until the
    /// sentinel expiry, so every snapshot keeps it.
    pub fn placeholder(id: DocId, sector: Sector) -> Self {
        LegalDocument {
            id,
            sector,
            date_of_effect: NaiveDate::from_ymd_opt(1, 1, 1).expect("valid date"),
            date_of_expiry: SENTINEL_EXPIRY,
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.date_of_effect > self.date_of_expiry {
            return Err(GraphError::InvertedInterval {
                id: self.id.to_string(),
                effect: self.date_of_effect,
                expiry: self.date_of_expiry,
            });
        }
        Ok(())
    }

    /// Closed-interval membership: effect <= at <= expiry.
    pub fn is_active_at(&self, at: NaiveDate) -> bool {
        self.date_of_effect <= at && at <= self.date_of_expiry
    }

    pub fn has_sunset(&self) -> bool {
        self.date_of_expiry != SENTINEL_EXPIRY
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Reference {
    pub source: DocId,
    pub target: DocId,
    pub kind: RefType,
}

impl Reference {
    pub fn new(source: DocId, target: DocId, kind: RefType) -> Self {
        Reference {
            source,
            target,
            kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    In,
    Out,
    Total,
}

/// Which view of the graph a degree query is answered on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    TypedMultigraph,
    SimpleProjection,
}

/// Single-writer construction phase of a [`LegislationGraph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    docs: Vec<LegalDocument>,
    stub: Vec<bool>,
    index: HashMap<DocId, NodeIx>,
    edges: Vec<(NodeIx, NodeIx, RefType)>,
    seen: HashSet<(NodeIx, NodeIx, RefType)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.docs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn document(&self, id: &str) -> Option<&LegalDocument> {
        self.index.get(id).map(|&ix| &self.docs[ix])
    }

    pub fn add_document(&mut self, doc: LegalDocument) -> Result<(), GraphError> {
        self.insert(doc, false)
    }

    /// Adds a placeholder for a referenced but undescribed document.
    pub fn add_stub(&mut self, doc: LegalDocument) -> Result<(), GraphError> {
        self.insert(doc, true)
    }

    fn insert(&mut self, doc: LegalDocument, stub: bool) -> Result<(), GraphError> {
        doc.validate()?;
        if self.index.contains_key(&doc.id) {
            return Err(GraphError::DuplicateId(doc.id.to_string()));
        }
        self.index.insert(doc.id.clone(), self.docs.len());
        self.docs.push(doc);
        self.stub.push(stub);
        Ok(())
    }

    /// Stores a typed edge. Returns `Ok(false)` when the triple was already
    /// present (duplicates are dropped, not rejected).
    pub fn add_reference(&mut self, r: &Reference) -> Result<bool, GraphError> {
        if r.source == r.target {
            return Err(GraphError::SelfLoop(r.source.to_string()));
        }
        let missing = |id: &DocId| GraphError::MissingEndpoint {
            source_id: r.source.to_string(),
            target: r.target.to_string(),
            missing: id.to_string(),
        };
        let s = *self.index.get(&r.source).ok_or_else(|| missing(&r.source))?;
        let t = *self.index.get(&r.target).ok_or_else(|| missing(&r.target))?;
        Ok(self.push_edge(s, t, r.kind))
    }

    pub(crate) fn push_edge(&mut self, s: NodeIx, t: NodeIx, kind: RefType) -> bool {
        debug_assert_ne!(s, t);
        if self.seen.insert((s, t, kind)) {
            self.edges.push((s, t, kind));
            true
        } else {
            false
        }
    }

    pub(crate) fn index_of(&self, id: &str) -> Option<NodeIx> {
        self.index.get(id).copied()
    }

    /// Ends the construction phase.
    pub fn seal(self) -> LegislationGraph {
        LegislationGraph::from_parts(self.docs, self.stub, self.edges)
    }
}

/// Immutable, analysis-ready legislation network.
///
/// Both adjacency directions are kept in compressed sparse row form, with
/// each row sorted by (neighbor, kind).
#[derive(Debug, Clone)]
pub struct LegislationGraph {
    docs: Vec<LegalDocument>,
    stub: Vec<bool>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeIx>,
    out_kinds: Vec<RefType>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeIx>,
    in_kinds: Vec<RefType>,
    projection: OnceLock<SimpleProjection>,
}

impl Default for LegislationGraph {
    fn default() -> Self {
        Self::from_parts(Vec::new(), Vec::new(), Vec::new())
    }
}

impl LegislationGraph {
    /// Builds a sealed graph from already validated parts. Edge endpoints
    /// index into `docs`; the triples must be unique and loop-free.
    pub(crate) fn from_parts(
        docs: Vec<LegalDocument>,
        stub: Vec<bool>,
        mut edges: Vec<(NodeIx, NodeIx, RefType)>,
    ) -> Self {
        let n = docs.len();
        let mut order: Vec<NodeIx> = (0..n).collect();
        order.sort_by(|&a, &b| docs[a].id.cmp(&docs[b].id));
        let already_sorted = order.iter().enumerate().all(|(i, &o)| i == o);

        let (docs, stub) = if already_sorted {
            (docs, stub)
        } else {
            let mut rank = vec![0; n];
            for (new, &old) in order.iter().enumerate() {
                rank[old] = new;
            }
            for e in &mut edges {
                e.0 = rank[e.0];
                e.1 = rank[e.1];
            }
            let mut slots: Vec<Option<(LegalDocument, bool)>> =
                docs.into_iter().zip(stub).map(Some).collect();
            order
                .iter()
                .map(|&old| slots[old].take().expect("permutation"))
                .unzip()
        };

        edges.sort_unstable();
        let (out_offsets, out_targets, out_kinds) = csr(n, edges.iter().map(|&(s, t, k)| (s, t, k)));
        let mut reversed: Vec<_> = edges.iter().map(|&(s, t, k)| (t, s, k)).collect();
        reversed.sort_unstable();
        let (in_offsets, in_sources, in_kinds) = csr(n, reversed.into_iter());

        LegislationGraph {
            docs,
            stub,
            out_offsets,
            out_targets,
            out_kinds,
            in_offsets,
            in_sources,
            in_kinds,
            projection: OnceLock::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.docs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn document(&self, ix: NodeIx) -> &LegalDocument {
        &self.docs[ix]
    }

    pub fn documents(&self) -> &[LegalDocument] {
        &self.docs
    }

    pub fn is_stub(&self, ix: NodeIx) -> bool {
        self.stub[ix]
    }

    pub fn stub_count(&self) -> usize {
        self.stub.iter().filter(|&&s| s).count()
    }

    pub fn index_of(&self, id: &str) -> Option<NodeIx> {
        self.docs.binary_search_by(|d| d.id.as_str().cmp(id)).ok()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index_of(id).is_some()
    }

    fn require(&self, id: &str) -> Result<NodeIx, GraphError> {
        self.index_of(id)
            .ok_or_else(|| GraphError::UnknownId(id.to_owned()))
    }

    /// Outgoing `(target, kind)` pairs of a node.
    pub fn out_edges(&self, ix: NodeIx) -> impl Iterator<Item = (NodeIx, RefType)> + '_ {
        let r = self.out_offsets[ix]..self.out_offsets[ix + 1];
        self.out_targets[r.clone()]
            .iter()
            .copied()
            .zip(self.out_kinds[r].iter().copied())
    }

    /// Incoming `(source, kind)` pairs of a node.
    pub fn in_edges(&self, ix: NodeIx) -> impl Iterator<Item = (NodeIx, RefType)> + '_ {
        let r = self.in_offsets[ix]..self.in_offsets[ix + 1];
        self.in_sources[r.clone()]
            .iter()
            .copied()
            .zip(self.in_kinds[r].iter().copied())
    }

    /// Targets of outgoing edges; repeated once per edge kind.
    pub fn successors(&self, ix: NodeIx) -> &[NodeIx] {
        &self.out_targets[self.out_offsets[ix]..self.out_offsets[ix + 1]]
    }

    /// Sources of incoming edges; repeated once per edge kind.
    pub fn predecessors(&self, ix: NodeIx) -> &[NodeIx] {
        &self.in_sources[self.in_offsets[ix]..self.in_offsets[ix + 1]]
    }

    /// All typed edges as `(source, target, kind)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeIx, NodeIx, RefType)> + '_ {
        (0..self.node_count()).flat_map(move |s| self.out_edges(s).map(move |(t, k)| (s, t, k)))
    }

    pub fn references(&self) -> impl Iterator<Item = Reference> + '_ {
        self.edges().map(|(s, t, k)| {
            Reference::new(self.docs[s].id.clone(), self.docs[t].id.clone(), k)
        })
    }

    pub fn in_degree(&self, ix: NodeIx) -> usize {
        self.in_offsets[ix + 1] - self.in_offsets[ix]
    }

    pub fn out_degree(&self, ix: NodeIx) -> usize {
        self.out_offsets[ix + 1] - self.out_offsets[ix]
    }

    pub fn total_degree(&self, ix: NodeIx) -> usize {
        self.in_degree(ix) + self.out_degree(ix)
    }

    pub fn degrees(&self, direction: Direction) -> Vec<usize> {
        (0..self.node_count())
            .map(|ix| match direction {
                Direction::In => self.in_degree(ix),
                Direction::Out => self.out_degree(ix),
                Direction::Total => self.total_degree(ix),
            })
            .collect()
    }

    pub fn degree(&self, id: &str, direction: Direction, scope: Scope) -> Result<usize, GraphError> {
        let ix = self.require(id)?;
        Ok(match scope {
            Scope::TypedMultigraph => match direction {
                Direction::In => self.in_degree(ix),
                Direction::Out => self.out_degree(ix),
                Direction::Total => self.total_degree(ix),
            },
            Scope::SimpleProjection => self.projection().degree(ix),
        })
    }

    /// The undirected simple graph underlying this multigraph; computed once.
    pub fn projection(&self) -> &SimpleProjection {
        self.projection.get_or_init(|| SimpleProjection::from_graph(self))
    }

    /// Subgraph on the nodes flagged in `keep` carrying only edges whose
    /// kind passes `keep_kind`.
    pub fn induced(&self, keep: &[bool], keep_kind: impl Fn(RefType) -> bool) -> LegislationGraph {
        assert_eq!(keep.len(), self.node_count());
        let mut remap = vec![usize::MAX; self.node_count()];
        let mut docs = Vec::new();
        let mut stub = Vec::new();
        for (ix, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
            remap[ix] = docs.len();
            docs.push(self.docs[ix].clone());
            stub.push(self.stub[ix]);
        }
        let edges = self
            .edges()
            .filter(|&(s, t, k)| keep[s] && keep[t] && keep_kind(k))
            .map(|(s, t, k)| (remap[s], remap[t], k))
            .collect();
        LegislationGraph::from_parts(docs, stub, edges)
    }

    /// Subgraph induced by the given node indices, all edge kinds kept.
    pub fn subgraph(&self, nodes: &[NodeIx]) -> LegislationGraph {
        let mut keep = vec![false; self.node_count()];
        for &ix in nodes {
            keep[ix] = true;
        }
        self.induced(&keep, |_| true)
    }

    /// Reopens the graph for construction (a copy; `self` stays sealed).
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::new();
        for (ix, doc) in self.docs.iter().enumerate() {
            b.insert(doc.clone(), self.stub[ix])
                .expect("sealed graph has unique valid documents");
        }
        for (s, t, k) in self.edges() {
            b.push_edge(s, t, k);
        }
        b
    }
}

fn csr(
    n: usize,
    sorted: impl Iterator<Item = (NodeIx, NodeIx, RefType)>,
) -> (Vec<usize>, Vec<NodeIx>, Vec<RefType>) {
    let mut offsets = vec![0usize; n + 1];
    let mut targets = Vec::new();
    let mut kinds = Vec::new();
    for (s, t, k) in sorted {
        offsets[s + 1] += 1;
        targets.push(t);
        kinds.push(k);
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    (offsets, targets, kinds)
}

/// Undirected simple graph: an edge joins u and v iff any typed reference
/// exists between them in either direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleProjection {
    offsets: Vec<usize>,
    neighbors: Vec<NodeIx>,
}

impl SimpleProjection {
    pub fn from_graph(g: &LegislationGraph) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        let mut row = Vec::new();
        for ix in 0..n {
            row.clear();
            row.extend_from_slice(g.successors(ix));
            row.extend_from_slice(g.predecessors(ix));
            row.sort_unstable();
            row.dedup();
            neighbors.extend_from_slice(&row);
            offsets.push(neighbors.len());
        }
        SimpleProjection { offsets, neighbors }
    }

    /// Builds a projection from an undirected edge list on `n` nodes,
    /// dropping loops and parallel edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeIx, NodeIx)>) -> Self {
        let mut rows = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                rows[u].push(v);
                rows[v].push(u);
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            neighbors.extend(row);
            offsets.push(neighbors.len());
        }
        SimpleProjection { offsets, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, ix: NodeIx) -> &[NodeIx] {
        &self.neighbors[self.offsets[ix]..self.offsets[ix + 1]]
    }

    pub fn degree(&self, ix: NodeIx) -> usize {
        self.offsets[ix + 1] - self.offsets[ix]
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeIx, NodeIx)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn doc(id: &str) -> LegalDocument {
        LegalDocument::new(DocId::new(id).unwrap(), Sector::Legislation, date("1970-03-20"), None)
            .unwrap()
    }

    fn reference(s: &str, t: &str, k: RefType) -> Reference {
        Reference::new(DocId::new(s).unwrap(), DocId::new(t).unwrap(), k)
    }

    #[test]
    fn add_document_and_query() {
        let mut b = GraphBuilder::new();
        b.add_document(doc("370L0220")).unwrap();
        assert_eq!(b.node_count(), 1);
        let g = b.seal();
        assert!(g.contains("370L0220"));
        let d = g.document(g.index_of("370L0220").unwrap());
        assert_eq!(d.sector, Sector::Legislation);
        assert_eq!(d.date_of_expiry, SENTINEL_EXPIRY);
    }

    #[test]
    fn duplicate_id_rejected() {
        let mut b = GraphBuilder::new();
        b.add_document(doc("A")).unwrap();
        assert_eq!(b.add_document(doc("A")), Err(GraphError::DuplicateId("A".into())));
    }

    #[test]
    fn inverted_interval_rejected() {
        let err = LegalDocument::new(
            DocId::new("A").unwrap(),
            Sector::Legislation,
            date("1990-01-01"),
            Some(date("1980-01-01")),
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::InvertedInterval { .. }));
    }

    #[test]
    fn empty_id_rejected() {
        assert_eq!(DocId::new(""), Err(GraphError::EmptyId));
        assert!(serde_json::from_str::<DocId>("\"\"").is_err());
    }

    #[test]
    fn reciprocal_amendments_are_two_edges() {
        let mut b = GraphBuilder::new();
        b.add_document(doc("370L0220")).unwrap();
        b.add_document(doc("383L0351")).unwrap();
        assert!(b.add_reference(&reference("383L0351", "370L0220", RefType::AmendmentTo)).unwrap());
        assert!(b.add_reference(&reference("370L0220", "383L0351", RefType::AmendedBy)).unwrap());
        assert_eq!(b.seal().edge_count(), 2);
    }

    #[test]
    fn duplicate_triple_is_idempotent() {
        let mut b = GraphBuilder::new();
        b.add_document(doc("A")).unwrap();
        b.add_document(doc("B")).unwrap();
        let r = reference("A", "B", RefType::LegalBasis);
        assert!(b.add_reference(&r).unwrap());
        assert!(!b.add_reference(&r).unwrap());
        assert_eq!(b.seal().edge_count(), 1);
    }

    #[test]
    fn self_loop_and_missing_endpoint() {
        let mut b = GraphBuilder::new();
        b.add_document(doc("A")).unwrap();
        assert_eq!(
            b.add_reference(&reference("A", "A", RefType::InstrumentsCited)),
            Err(GraphError::SelfLoop("A".into()))
        );
        match b.add_reference(&reference("A", "Z", RefType::Other)) {
            Err(GraphError::MissingEndpoint { missing, .. }) => assert_eq!(missing, "Z"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degrees_typed_and_projected() {
        let mut b = GraphBuilder::new();
        for id in ["hub", "a", "b", "c", "d", "e", "lone"] {
            b.add_document(doc(id)).unwrap();
        }
        for id in ["a", "b", "c", "d", "e"] {
            b.add_reference(&reference(id, "hub", RefType::InstrumentsCited)).unwrap();
        }
        // three kinds between the same pair
        b.add_reference(&reference("a", "b", RefType::LegalBasis)).unwrap();
        b.add_reference(&reference("b", "a", RefType::AmendedBy)).unwrap();
        b.add_reference(&reference("a", "b", RefType::Other)).unwrap();
        let g = b.seal();
        assert_eq!(g.degree("hub", Direction::In, Scope::TypedMultigraph).unwrap(), 5);
        assert_eq!(g.degree("lone", Direction::Total, Scope::TypedMultigraph).unwrap(), 0);
        // "b": 1 to hub + 3 with "a"
        assert_eq!(g.degree("b", Direction::Total, Scope::TypedMultigraph).unwrap(), 4);
        assert_eq!(g.degree("b", Direction::Total, Scope::SimpleProjection).unwrap(), 2);
        for id in ["a", "b", "c"] {
            let ix = g.index_of(id).unwrap();
            assert_eq!(g.in_degree(ix) + g.out_degree(ix), g.total_degree(ix));
        }
        assert_eq!(
            g.degree("nope", Direction::In, Scope::TypedMultigraph),
            Err(GraphError::UnknownId("nope".into()))
        );
    }

    #[test]
    fn projection_collapses_pairs() {
        assert_eq!(LegislationGraph::default().projection().edge_count(), 0);

        let mut b = GraphBuilder::new();
        b.add_document(doc("A")).unwrap();
        b.add_document(doc("B")).unwrap();
        b.add_reference(&reference("A", "B", RefType::LegalBasis)).unwrap();
        b.add_reference(&reference("B", "A", RefType::InstrumentsCited)).unwrap();
        let g = b.seal();
        assert_eq!(g.projection().edge_count(), 1);
    }

    #[test]
    fn layered_example_projection() {
        // Treaty T1, agreement I1, legislation L1..L3; six typed edges.
        // Unordered pairs: {L1,T1} x2, {L2,T1}, {L3,L1} x2, {L3,I1} -> 4.
        let mut b = GraphBuilder::new();
        for id in ["T1", "I1", "L1", "L2", "L3"] {
            b.add_document(doc(id)).unwrap();
        }
        let edges = [
            ("L1", "T1", RefType::LegalBasis),
            ("L1", "T1", RefType::InstrumentsCited),
            ("L2", "T1", RefType::LegalBasis),
            ("L3", "L1", RefType::InstrumentsCited),
            ("L1", "L3", RefType::AmendedBy),
            ("L3", "I1", RefType::InstrumentsCited),
        ];
        for (s, t, k) in edges {
            b.add_reference(&reference(s, t, k)).unwrap();
        }
        let g = b.seal();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.projection().edge_count(), 4);
    }

    #[test]
    fn seal_sorts_by_id_and_remaps_edges() {
        let mut b = GraphBuilder::new();
        for id in ["c", "a", "b"] {
            b.add_document(doc(id)).unwrap();
        }
        b.add_reference(&reference("c", "a", RefType::Other)).unwrap();
        let g = b.seal();
        let ids: Vec<_> = g.documents().iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        let refs: Vec<_> = g.references().collect();
        assert_eq!(refs, vec![reference("c", "a", RefType::Other)]);
    }

    #[test]
    fn sector_and_reftype_codes() {
        assert_eq!(Sector::ALL.len(), 6);
        for (i, s) in Sector::ALL.iter().enumerate() {
            assert_eq!(s.code() as usize, i + 1);
            assert_eq!(Sector::from_code(s.code()).unwrap(), *s);
        }
        assert!(Sector::from_code(0).is_err());
        assert!(Sector::from_code(7).is_err());
        for r in RefType::ALL {
            assert_eq!(RefType::from_token(r.token()).unwrap(), r);
        }
        assert_eq!(RefType::AmendmentTo.reciprocal(), Some(RefType::AmendedBy));
        assert_eq!(RefType::LegalBasis.reciprocal(), None);
    }

    #[test]
    fn to_builder_reopens_a_copy() {
        let mut b = GraphBuilder::new();
        b.add_document(doc("A")).unwrap();
        let g = b.seal();
        let mut again = g.to_builder();
        again.add_document(doc("B")).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(again.seal().node_count(), 2);
    }
}
