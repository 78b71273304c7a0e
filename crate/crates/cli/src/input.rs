use std::fs;
use std::io::Read;
use std::path::Path;

use lexnet::corpus::{ingest_csv, ingest_jsonl, IngestMode, IngestReport};
use lexnet::filters::{snapshot, SnapshotSpec};
use lexnet::LegislationGraph;
use sha2::{Digest, Sha256};

use crate::args::{CorpusArgs, Format, ModeArg, SelectArgs};
use crate::CliError;

pub struct Loaded {
    pub graph: LegislationGraph,
    pub report: IngestReport,
    pub digest: String,
}

fn read_all(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) => fs::read(p).map_err(|e| CliError::Data(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| CliError::Data(format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

pub fn load(args: &CorpusArgs) -> Result<Loaded, CliError> {
    let mode = match args.mode {
        ModeArg::Strict => IngestMode::Strict,
        ModeArg::Lenient => IngestMode::Lenient,
    };
    let docs = read_all(args.input.as_deref())?;
    let mut hasher = Sha256::new();
    hasher.update(&docs);
    let result = match args.format {
        Format::Jsonl => {
            if args.edges.is_some() {
                return Err(CliError::Usage("--edges only applies to --format csv".into()));
            }
            ingest_jsonl(docs.as_slice(), mode)
        }
        Format::Csv => {
            let edges_path = args
                .edges
                .as_deref()
                .ok_or_else(|| CliError::Usage("--format csv needs --edges".into()))?;
            let edges = read_all(Some(edges_path))?;
            hasher.update(&edges);
            ingest_csv(docs.as_slice(), edges.as_slice(), mode)
        }
    };
    let (graph, report) = result.map_err(|e| CliError::Data(format!("corpus-io: {e}")))?;
    Ok(Loaded { graph, report, digest: hex::encode(hasher.finalize()) })
}

/// Applies `--current` (point-in-time snapshot) and then `--preset`.
pub fn select(g: &LegislationGraph, sel: &SelectArgs) -> LegislationGraph {
    let current = match sel.current {
        Some(at) => snapshot(g, SnapshotSpec::at(at)),
        None => g.clone(),
    };
    match sel.preset {
        Some(p) => p.apply(&current),
        None => current,
    }
}

/// Earliest and latest year of effect over real (non-stub) documents.
pub fn year_span(g: &LegislationGraph) -> Option<(i32, i32)> {
    use chrono::Datelike;
    let mut years = g
        .documents()
        .iter()
        .enumerate()
        .filter(|&(ix, _)| !g.is_stub(ix))
        .map(|(_, d)| d.date_of_effect.year());
    let first = years.next()?;
    Some(years.fold((first, first), |(lo, hi), y| (lo.min(y), hi.max(y))))
}

pub fn resolve_years(g: &LegislationGraph, from: Option<i32>, to: Option<i32>) -> Result<(i32, i32), CliError> {
    let span = year_span(g);
    let from = from.or(span.map(|s| s.0));
    let to = to.or(span.map(|s| s.1));
    match (from, to) {
        (Some(f), Some(t)) if f <= t => Ok((f, t)),
        (Some(f), Some(t)) => Err(CliError::Usage(format!("--from {f} is after --to {t}"))),
        _ => Err(CliError::Usage("empty corpus: pass --from and --to".into())),
    }
}
