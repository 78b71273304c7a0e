use lexnet::corpus::{export, ingest, ingest_csv, ingest_jsonl, write_jsonl, CorpusError, IngestMode};
use lexnet::generator::{generate, DocsSchedule, GeneratorConfig};
use lexnet::LegislationGraph;
use lexnet_oracles::{id_sets, rng};
use proptest::prelude::*;
use rand::Rng;

fn random_corpus(seed: u64) -> LegislationGraph {
    let mut r = rng(seed);
    let start = r.random_range(1951..1990);
    let cfg = GeneratorConfig {
        start_year: start,
        end_year: start + r.random_range(2..15),
        docs_per_year: DocsSchedule::Constant(r.random_range(10..60)),
        citations_per_doc: r.random_range(0.5..2.0),
        densification_exponent: r.random_range(1.0..1.2),
        preferential_mixing: r.random_range(0.0..1.0),
        triadic_closure: r.random_range(0.0..0.8),
        sunset_probability: r.random_range(0.0..0.6),
        seed,
        ..GeneratorConfig::default()
    };
    generate(&cfg).unwrap()
}

fn to_jsonl(g: &LegislationGraph) -> Vec<u8> {
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &export(g)).unwrap();
    buf
}

#[test]
fn jsonl_round_trip_is_isomorphic() {
    for seed in 0..50u64 {
        let g = random_corpus(seed);
        let bytes = to_jsonl(&g);
        let (h, report) = ingest_jsonl(bytes.as_slice(), IngestMode::Strict).unwrap();
        assert_eq!(id_sets(&h), id_sets(&g), "seed {seed}");
        assert_eq!(h.documents(), g.documents());
        assert_eq!(report.reciprocals_added, 0);
        assert_eq!(report.deduplicated, 0);
        assert_eq!(to_jsonl(&h), bytes, "export is canonical");
    }
}

#[test]
fn csv_round_trip_is_isomorphic() {
    for seed in 100..110u64 {
        let g = random_corpus(seed);
        let mut docs = csv::Writer::from_writer(Vec::new());
        docs.write_record(["id", "sector", "date_of_effect", "date_of_expiry"]).unwrap();
        let mut edges = csv::Writer::from_writer(Vec::new());
        edges.write_record(["source", "target", "type"]).unwrap();
        for rec in export(&g) {
            let expiry = rec.date_of_expiry.map(|d| d.to_string()).unwrap_or_default();
            docs.write_record([rec.id.clone(), rec.sector.code().to_string(), rec.date_of_effect.to_string(), expiry])
                .unwrap();
            for r in rec.references {
                edges.write_record([rec.id.as_str(), r.target.as_str(), r.kind.token()]).unwrap();
            }
        }
        let docs = docs.into_inner().unwrap();
        let edges = edges.into_inner().unwrap();
        let (h, _) = ingest_csv(docs.as_slice(), edges.as_slice(), IngestMode::Strict).unwrap();
        assert_eq!(id_sets(&h), id_sets(&g), "seed {seed}");
    }
}

#[test]
fn generator_is_deterministic() {
    assert_eq!(to_jsonl(&random_corpus(7)), to_jsonl(&random_corpus(7)));
    assert_ne!(to_jsonl(&random_corpus(7)), to_jsonl(&random_corpus(8)));
}

#[test]
fn strict_rejects_what_lenient_stubs() {
    let g = random_corpus(3);
    let mut records = export(&g);
    let victim = records.iter().position(|r| !r.references.is_empty()).unwrap();
    records[victim].references[0].target = "MISSING".into();
    let err = ingest(records.clone(), IngestMode::Strict).unwrap_err();
    assert!(matches!(err, CorpusError::Dangling { .. }), "{err}");
    let (h, report) = ingest(records, IngestMode::Lenient).unwrap();
    assert_eq!(report.stub_ids, vec!["MISSING".to_owned()]);
    assert!(h.is_stub(h.index_of("MISSING").unwrap()));
    assert_eq!(h.node_count(), g.node_count() + 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ingest_preserves_degree_sums(seed in any::<u64>()) {
        let g = random_corpus(seed);
        let (h, report) = ingest(export(&g), IngestMode::Strict).unwrap();
        prop_assert_eq!(report.nodes, g.node_count());
        prop_assert_eq!(report.edges, g.edge_count());
        prop_assert_eq!(report.per_type_counts.values().sum::<usize>(), g.edge_count());
        prop_assert_eq!(h.degrees(lexnet::Direction::Total), g.degrees(lexnet::Direction::Total));
    }
}
