use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use lexnet::filters::SubNetwork;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "lexnet", version, about = "Build and analyse legislation citation networks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Master seed; every randomized step derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving JSON reports and CSV side files.
    #[arg(long, global = true, env = "LEXNET_OUT_DIR", default_value = ".")]
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Worker thread cap for parallel analyses.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus and report what was built from it.
    Ingest {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Also write the normalized corpus (reciprocals added, duplicates dropped) as JSONL.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic corpus as JSONL.
    Generate {
        #[command(flatten)]
        generator: GeneratorArgs,
        /// Destination file; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Extract a sub-network or snapshot and write it as JSONL.
    Filter {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        select: SelectArgs,
        /// Keep only documents of this sector (1-6).
        #[arg(long)]
        sector: Option<u8>,
        /// Keep only edges of this reference type.
        #[arg(long)]
        reftype: Option<String>,
        /// Keep only documents in effect on this date.
        #[arg(long)]
        at: Option<NaiveDate>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Degree statistics, inequality, components, paths, clustering and assortativity.
    Metrics {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        select: SelectArgs,
        #[command(flatten)]
        paths: PathArgs,
    },
    /// Bow-tie decomposition, optionally with the yearly core/giant-component series.
    Bowtie {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        select: SelectArgs,
        #[command(flatten)]
        years: YearArgs,
        /// Compute the yearly largest-SCC and giant-component fractions.
        #[arg(long)]
        series: bool,
    },
    /// Discrete power-law fit of a degree distribution with bootstrap p-value.
    Powerlaw {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        select: SelectArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::In)]
        direction: DirectionArg,
    },
    /// Compare path length and clustering with Erdős–Rényi graphs of the same size.
    Smallworld {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        select: SelectArgs,
        #[command(flatten)]
        small_world: SmallWorldArgs,
    },
    /// Yearly active-network counts and the densification fit.
    Temporal {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Sub-network to analyse; all four when absent.
        #[arg(long)]
        preset: Option<SubNetwork>,
        #[command(flatten)]
        years: YearArgs,
    },
    /// Giant-component decay under random failures and degree-targeted attacks.
    Resilience {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        select: SelectArgs,
        #[command(flatten)]
        resilience: ResilienceArgs,
    },
    /// Run every analysis on the four named networks and write one combined report.
    ReportAll {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Date defining the active ("current") networks; defaults to the latest date of effect.
        #[arg(long)]
        current: Option<NaiveDate>,
        #[command(flatten)]
        years: YearArgs,
        #[command(flatten)]
        fit: FitArgs,
        /// Random-failure repetitions.
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Null replicas for the small-world comparison.
        #[arg(long, default_value_t = 10)]
        sw_replicas: usize,
        /// Giant components above this size get sampled path statistics.
        #[arg(long, default_value_t = 20_000)]
        sampled_above: usize,
        /// Breadth-first sources used in sampled mode.
        #[arg(long, default_value_t = 1000)]
        sources: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorpusArgs {
    /// Corpus file (the documents file for CSV); standard input when absent.
    #[arg(long)]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// Edge file, required with `--format csv`.
    #[arg(long)]
    #[serde(skip)]
    pub edges: Option<PathBuf>,
    /// How references to unknown documents are handled.
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelectArgs {
    /// Named sub-network: LN, RN, ICN or LBN.
    #[arg(long)]
    pub preset: Option<SubNetwork>,
    /// Restrict to documents in effect on this date before analysing.
    #[arg(long)]
    pub current: Option<NaiveDate>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct YearArgs {
    /// First year of yearly series; defaults to the earliest year of effect.
    #[arg(long = "from")]
    pub from_year: Option<i32>,
    /// Last year of yearly series; defaults to the latest year of effect.
    #[arg(long = "to")]
    pub to_year: Option<i32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PathArgs {
    /// Sample this many breadth-first sources instead of all giant-component nodes.
    #[arg(long)]
    pub sources: Option<usize>,
    /// Follow edge direction for path lengths.
    #[arg(long)]
    pub directed_paths: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionArg {
    In,
    Out,
    Total,
}

impl From<DirectionArg> for lexnet::Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::In => lexnet::Direction::In,
            DirectionArg::Out => lexnet::Direction::Out,
            DirectionArg::Total => lexnet::Direction::Total,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorArg {
    Approximate,
    ExactZeta,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// Bootstrap replicas for the power-law p-value.
    #[arg(long, default_value_t = lexnet::powerlaw::DEFAULT_BOOTSTRAP_REPLICAS)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Approximate)]
    pub estimator: EstimatorArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SmallWorldArgs {
    #[arg(long, default_value_t = 10)]
    pub replicas: usize,
    #[arg(long, default_value_t = 1.5)]
    pub length_factor: f64,
    #[arg(long, default_value_t = 10.0)]
    pub clustering_factor: f64,
    #[arg(long, default_value_t = 100_000)]
    pub sampled_above: usize,
    #[arg(long, default_value_t = 1000)]
    pub sampled_sources: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyArg {
    Random,
    Targeted,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeModeArg {
    Static,
    Adaptive,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResilienceArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
    pub strategy: StrategyArg,
    /// Share of the remaining nodes removed per step.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Random-failure repetitions (targeted attacks always run once).
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = DegreeModeArg::Static)]
    pub degree_mode: DegreeModeArg,
    #[arg(long, default_value_t = 0.99)]
    pub stop_at: f64,
    /// Skip the matched Erdős–Rényi comparison.
    #[arg(long)]
    pub no_null: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GeneratorArgs {
    /// JSON file with a full generator configuration; flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub start_year: Option<i32>,
    #[arg(long)]
    pub end_year: Option<i32>,
    /// Constant number of documents per year.
    #[arg(long)]
    pub docs_per_year: Option<u32>,
    /// Turn the yearly count into `docs_per_year * (1 + rate)^t`.
    #[arg(long, requires = "docs_per_year")]
    pub growth_rate: Option<f64>,
    #[arg(long)]
    pub citations_per_doc: Option<f64>,
    #[arg(long)]
    pub densification_exponent: Option<f64>,
    #[arg(long)]
    pub preferential_mixing: Option<f64>,
    #[arg(long)]
    pub triadic_closure: Option<f64>,
    #[arg(long)]
    pub sunset_probability: Option<f64>,
    #[arg(long)]
    pub sunset_horizon_years: Option<u32>,
}
