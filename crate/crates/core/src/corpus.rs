//! Corpus records: line-delimited JSON (one document per line) or a pair of
//! CSV files (document metadata plus an edge list), with strict or lenient
//! handling of references to documents the corpus does not describe.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    DocId, GraphBuilder, GraphError, LegalDocument, LegislationGraph, RefType, Reference, Sector,
    SENTINEL_EXPIRY,
};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: GraphError },
    #[error("line {line}: {source_id} references unknown document {target}")]
    Dangling {
        line: usize,
        source_id: String,
        target: String,
    },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRecord {
    pub target: String,
    #[serde(rename = "type")]
    pub kind: RefType,
}

/// One document and its outgoing references.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub id: String,
    pub sector: Sector,
    pub date_of_effect: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date_of_expiry: Option<NaiveDate>,
    #[serde(default)]
    pub references: Vec<ReferenceRecord>,
    /// Set on placeholder documents created for dangling references.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub stub: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IngestMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IngestReport {
    pub nodes: usize,
    pub edges: usize,
    pub stubs: usize,
    /// Explicit references dropped because the same typed edge was already present.
    pub deduplicated: usize,
    /// Final edge count per reference-type token.
    pub per_type_counts: BTreeMap<String, usize>,
    pub deduplicated_per_type: BTreeMap<String, usize>,
    /// Reverse amendment edges added because the feed lacked them.
    pub reciprocals_added: usize,
    /// References a document makes to itself; excluded from the graph.
    pub internal_references_dropped: usize,
    pub stub_ids: Vec<String>,
}

fn token_map() -> BTreeMap<String, usize> {
    RefType::ALL.iter().map(|r| (r.token().to_owned(), 0)).collect()
}

/// Builds a graph from records in stream order. `line` numbers reported in
/// errors are 1-based positions in the record sequence.
pub fn ingest<I>(records: I, mode: IngestMode) -> Result<(LegislationGraph, IngestReport), CorpusError>
where
    I: IntoIterator<Item = DocumentRecord>,
{
    let numbered = records.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect();
    ingest_numbered(numbered, mode)
}

fn ingest_numbered(
    records: Vec<(usize, DocumentRecord)>,
    mode: IngestMode,
) -> Result<(LegislationGraph, IngestReport), CorpusError> {
    let mut b = GraphBuilder::new();
    let mut report = IngestReport {
        per_type_counts: token_map(),
        deduplicated_per_type: token_map(),
        ..Default::default()
    };

    for (line, rec) in &records {
        let invalid = |source| CorpusError::Invalid { line: *line, source };
        let id = DocId::new(rec.id.clone()).map_err(invalid)?;
        let doc = LegalDocument::new(id, rec.sector, rec.date_of_effect, rec.date_of_expiry)
            .map_err(invalid)?;
        if rec.stub {
            b.add_stub(doc).map_err(invalid)?;
        } else {
            b.add_document(doc).map_err(invalid)?;
        }
    }

    let mut amendments = Vec::new();
    for (line, rec) in &records {
        let invalid = |source| CorpusError::Invalid { line: *line, source };
        let source = b.index_of(&rec.id).expect("inserted above");
        for r in &rec.references {
            if r.target == rec.id {
                report.internal_references_dropped += 1;
                continue;
            }
            let target = match b.index_of(&r.target) {
                Some(t) => t,
                None => match mode {
                    IngestMode::Strict => {
                        return Err(CorpusError::Dangling {
                            line: *line,
                            source_id: rec.id.clone(),
                            target: r.target.clone(),
                        })
                    }
                    IngestMode::Lenient => {
                        let id = DocId::new(r.target.clone()).map_err(invalid)?;
                        let stub = LegalDocument::new(
                            id,
                            Sector::Legislation,
                            rec.date_of_effect,
                            None,
                        )
                        .map_err(invalid)?;
                        b.add_stub(stub).map_err(invalid)?;
                        report.stub_ids.push(r.target.clone());
                        b.index_of(&r.target).expect("just added")
                    }
                },
            };
            if b.push_edge(source, target, r.kind) {
                if r.kind.reciprocal().is_some() {
                    amendments.push((source, target, r.kind));
                }
            } else {
                report.deduplicated += 1;
                *report
                    .deduplicated_per_type
                    .get_mut(r.kind.token())
                    .expect("all tokens present") += 1;
            }
        }
    }

    for (s, t, kind) in amendments {
        let reverse = kind.reciprocal().expect("amendment kind");
        if b.push_edge(t, s, reverse) {
            report.reciprocals_added += 1;
        }
    }

    let g = b.seal();
    report.nodes = g.node_count();
    report.edges = g.edge_count();
    report.stubs = g.stub_count();
    for (_, _, k) in g.edges() {
        *report.per_type_counts.get_mut(k.token()).expect("all tokens present") += 1;
    }
    Ok((g, report))
}

/// Parses line-delimited JSON records. Blank lines are skipped; line
/// numbers in errors refer to physical lines.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<(usize, DocumentRecord)>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let rec: DocumentRecord = serde_json::from_str(trimmed).map_err(|e| CorpusError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        out.push((line_no, rec));
    }
    Ok(out)
}

pub fn ingest_jsonl<R: BufRead>(
    reader: R,
    mode: IngestMode,
) -> Result<(LegislationGraph, IngestReport), CorpusError> {
    ingest_numbered(read_jsonl(reader)?, mode)
}

#[derive(Debug, Deserialize)]
struct CsvDocRow {
    id: String,
    sector: u8,
    date_of_effect: String,
    #[serde(default)]
    date_of_expiry: Option<String>,
    #[serde(default)]
    stub: Option<bool>,
}

#[derive(Debug, Deserialize)]
struct CsvEdgeRow {
    source: String,
    target: String,
    #[serde(rename = "type")]
    kind: String,
}

fn parse_date(s: &str, line: usize) -> Result<NaiveDate, CorpusError> {
    s.trim().parse().map_err(|e| CorpusError::Parse {
        line,
        message: format!("bad date {s:?}: {e}"),
    })
}

/// Reads the CSV alternative: a document file with header
/// `id,sector,date_of_effect,date_of_expiry[,stub]` (empty expiry means no
/// sunset) and an edge file with header `source,target,type`.
pub fn read_csv<D: std::io::Read, E: std::io::Read>(
    documents: D,
    edges: E,
) -> Result<Vec<(usize, DocumentRecord)>, CorpusError> {
    let mut records = Vec::new();
    let mut position = BTreeMap::new();
    let mut rdr = csv::Reader::from_reader(documents);
    for (i, row) in rdr.deserialize::<CsvDocRow>().enumerate() {
        // header is line 1
        let line = i + 2;
        let row = row.map_err(|e| CorpusError::Parse { line, message: e.to_string() })?;
        let sector = Sector::from_code(row.sector)
            .map_err(|e| CorpusError::Parse { line, message: e.to_string() })?;
        let expiry = match row.date_of_expiry.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(s) => Some(parse_date(s, line)?),
        };
        position.insert(row.id.clone(), records.len());
        records.push((
            line,
            DocumentRecord {
                id: row.id,
                sector,
                date_of_effect: parse_date(&row.date_of_effect, line)?,
                date_of_expiry: expiry,
                references: Vec::new(),
                stub: row.stub.unwrap_or(false),
            },
        ));
    }
    let mut rdr = csv::Reader::from_reader(edges);
    for (i, row) in rdr.deserialize::<CsvEdgeRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| CorpusError::Parse { line, message: e.to_string() })?;
        let kind = RefType::from_token(row.kind.trim())
            .map_err(|e| CorpusError::Parse { line, message: e.to_string() })?;
        let &slot = position.get(&row.source).ok_or_else(|| CorpusError::Parse {
            line,
            message: format!("edge source {} has no document row", row.source),
        })?;
        records[slot].1.references.push(ReferenceRecord { target: row.target, kind });
    }
    Ok(records)
}

pub fn ingest_csv<D: std::io::Read, E: std::io::Read>(
    documents: D,
    edges: E,
    mode: IngestMode,
) -> Result<(LegislationGraph, IngestReport), CorpusError> {
    ingest_numbered(read_csv(documents, edges)?, mode)
}

/// One record per node in id order, each listing its outgoing edges.
pub fn export(g: &LegislationGraph) -> Vec<DocumentRecord> {
    g.documents()
        .iter()
        .enumerate()
        .map(|(ix, doc)| DocumentRecord {
            id: doc.id.to_string(),
            sector: doc.sector,
            date_of_effect: doc.date_of_effect,
            date_of_expiry: (doc.date_of_expiry != SENTINEL_EXPIRY).then_some(doc.date_of_expiry),
            references: g
                .out_edges(ix)
                .map(|(t, kind)| ReferenceRecord {
                    target: g.document(t).id.to_string(),
                    kind,
                })
                .collect(),
            stub: g.is_stub(ix),
        })
        .collect()
}

pub fn write_jsonl<W: Write>(mut w: W, records: &[DocumentRecord]) -> Result<(), CorpusError> {
    for rec in records {
        serde_json::to_writer(&mut w, rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Sorted `(source, target, kind)` triples; handy for isomorphism checks.
pub fn edge_triples(g: &LegislationGraph) -> Vec<Reference> {
    let mut v: Vec<_> = g.references().collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fig1_jsonl() -> &'static str {
        concat!(
            r#"{"id":"370L0220","sector":3,"date_of_effect":"1970-03-20"}"#,
            "\n",
            r#"{"id":"383L0351","sector":3,"date_of_effect":"1983-06-16","references":[{"target":"370L0220","type":"amendment_to"}]}"#,
            "\n",
            r#"{"id":"389L0491","sector":3,"date_of_effect":"1989-07-17","references":[{"target":"370L0220","type":"amendment_to"}]}"#,
            "\n"
        )
    }

    #[test]
    fn fig1_materializes_reciprocals() {
        let (g, report) = ingest_jsonl(fig1_jsonl().as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(report.reciprocals_added, 2);
        assert_eq!(report.per_type_counts["amended_by"], 2);
        assert_eq!(report.per_type_counts["amendment_to"], 2);
        let target = g.index_of("370L0220").unwrap();
        assert_eq!(g.out_degree(target), 2);
        assert!(g.out_edges(target).all(|(_, k)| k == RefType::AmendedBy));
    }

    #[test]
    fn both_directions_in_feed_are_not_doubled() {
        let feed = concat!(
            r#"{"id":"A","sector":3,"date_of_effect":"1970-01-01","references":[{"target":"B","type":"amended_by"}]}"#,
            "\n",
            r#"{"id":"B","sector":3,"date_of_effect":"1971-01-01","references":[{"target":"A","type":"amendment_to"},{"target":"A","type":"amendment_to"}]}"#,
        );
        let (g, report) = ingest_jsonl(feed.as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.deduplicated, 1);
        assert_eq!(report.deduplicated_per_type["amendment_to"], 1);
        assert_eq!(report.reciprocals_added, 0);
    }

    #[test]
    fn empty_stream() {
        let (g, report) = ingest_jsonl("".as_bytes(), IngestMode::Strict).unwrap();
        assert!(g.is_empty());
        assert_eq!(report.nodes, 0);
        assert_eq!(report.edges, 0);
        assert_eq!(report.stubs, 0);
        assert!(report.per_type_counts.values().all(|&c| c == 0));
    }

    #[test]
    fn dangling_reference_policy() {
        let feed = r#"{"id":"370L0220","sector":3,"date_of_effect":"1970-03-20","references":[{"target":"999X9999","type":"instruments_cited"}]}"#;
        match ingest_jsonl(feed.as_bytes(), IngestMode::Strict) {
            Err(CorpusError::Dangling { source_id, target, line }) => {
                assert_eq!(source_id, "370L0220");
                assert_eq!(target, "999X9999");
                assert_eq!(line, 1);
            }
            other => panic!("expected dangling error, got {other:?}"),
        }
        let (g, report) = ingest_jsonl(feed.as_bytes(), IngestMode::Lenient).unwrap();
        assert_eq!(report.stubs, 1);
        assert_eq!(report.stub_ids, vec!["999X9999".to_owned()]);
        let stub = g.index_of("999X9999").unwrap();
        assert!(g.is_stub(stub));
        let doc = g.document(stub);
        assert_eq!(doc.sector, Sector::Legislation);
        assert_eq!(doc.date_of_effect, "1970-03-20".parse::<NaiveDate>().unwrap());
        assert_eq!(doc.date_of_expiry, SENTINEL_EXPIRY);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_date = "\n{\"id\":\"A\",\"sector\":3,\"date_of_effect\":\"1970-13-01\"}";
        match ingest_jsonl(bad_date.as_bytes(), IngestMode::Strict) {
            Err(CorpusError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let bad_sector = r#"{"id":"A","sector":9,"date_of_effect":"1970-01-01"}"#;
        assert!(matches!(
            ingest_jsonl(bad_sector.as_bytes(), IngestMode::Strict),
            Err(CorpusError::Parse { line: 1, .. })
        ));
        let bad_token = r#"{"id":"A","sector":3,"date_of_effect":"1970-01-01","references":[{"target":"B","type":"cites"}]}"#;
        assert!(matches!(
            ingest_jsonl(bad_token.as_bytes(), IngestMode::Lenient),
            Err(CorpusError::Parse { line: 1, .. })
        ));
        let inverted = r#"{"id":"A","sector":3,"date_of_effect":"1990-01-01","date_of_expiry":"1980-01-01"}"#;
        assert!(matches!(
            ingest_jsonl(inverted.as_bytes(), IngestMode::Strict),
            Err(CorpusError::Invalid { line: 1, .. })
        ));
    }

    #[test]
    fn internal_reference_dropped() {
        let feed = r#"{"id":"A","sector":3,"date_of_effect":"1970-01-01","references":[{"target":"A","type":"other"}]}"#;
        let (g, report) = ingest_jsonl(feed.as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(report.internal_references_dropped, 1);
    }

    #[test]
    fn export_round_trip_fig1() {
        let (g, _) = ingest_jsonl(fig1_jsonl().as_bytes(), IngestMode::Strict).unwrap();
        let records = export(&g);
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &records).unwrap();
        let (again, report) = ingest_jsonl(buf.as_slice(), IngestMode::Strict).unwrap();
        assert_eq!(again.documents(), g.documents());
        assert_eq!(edge_triples(&again), edge_triples(&g));
        assert_eq!(report.reciprocals_added, 0);
        assert!(export(&LegislationGraph::default()).is_empty());
    }

    #[test]
    fn csv_matches_jsonl() {
        let docs = "id,sector,date_of_effect,date_of_expiry\n370L0220,3,1970-03-20,\n383L0351,3,1983-06-16,\n389L0491,3,1989-07-17,2000-01-01\n";
        let edges = "source,target,type\n383L0351,370L0220,amendment_to\n389L0491,370L0220,amendment_to\n";
        let (g, _) = ingest_csv(docs.as_bytes(), edges.as_bytes(), IngestMode::Strict).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 4);
        let d = g.document(g.index_of("389L0491").unwrap());
        assert_eq!(d.date_of_expiry, "2000-01-01".parse::<NaiveDate>().unwrap());

        let bad = "source,target,type\nZZZ,370L0220,legal_basis\n";
        assert!(matches!(
            ingest_csv(docs.as_bytes(), bad.as_bytes(), IngestMode::Lenient),
            Err(CorpusError::Parse { line: 2, .. })
        ));
    }
}
