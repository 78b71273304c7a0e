use std::path::Path;

use lexnet::bowtie::{core_gc_series, decompose};
use lexnet::corpus::{export, write_jsonl};
use lexnet::filters::{annual_series, filter_reftype, filter_sector, snapshot, SnapshotSpec, SubNetwork};
use lexnet::generator::{generate, DocsSchedule, GeneratorConfig, GeneratorError};
use lexnet::metrics::{
    assortativity, clustering, components, degree_stats, lorenz_gini, network_summary, path_metrics_with,
    AssortativityCriterion, PathMetrics, PathMode, PathOptions,
};
use lexnet::powerlaw::{ccdf, fit_power_law_with, fitted_ccdf, goodness_of_fit_with, Estimator, FitOptions, FitResult};
use lexnet::random::{small_world_compare, SmallWorldConfig};
use lexnet::resilience::{compare_with_null, simulate, DegreeMode, ResilienceConfig, ResilienceCurve, Strategy};
use lexnet::temporal::{densification_fit, evolution_series, SnapshotStat};
use lexnet::{Direction, LegislationGraph, RefType, Sector};
use serde_json::{json, Value};

use crate::args::*;
use crate::input::{load, resolve_years, select};
use crate::output::{fmt9, to_value, write_stream, OutDir, RunManifest};
use crate::{compute, report_all, CliError};

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let out = || OutDir::new(&cli.global.out_dir);
    let seed = cli.global.seed;
    match &cli.command {
        Command::Ingest { corpus, output } => {
            let mut m = RunManifest::start("ingest", seed, json!({ "corpus": corpus }));
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            if let Some(path) = output {
                write_corpus(&loaded.graph, Some(path))?;
            }
            out()?.write_report("ingest", m, to_value(&loaded.report))?;
        }
        Command::Generate { generator, output } => {
            let config = generator_config(generator, seed)?;
            let m = RunManifest::start("generate", seed, to_value(&config));
            let g = generate(&config).map_err(|e| match e {
                GeneratorError::InvalidConfig(_) | GeneratorError::Infeasible { .. } => {
                    CliError::Usage(lexnet::Error::from(e).to_string())
                }
            })?;
            write_corpus(&g, output.as_deref())?;
            out()?.write_report("generate", m, json!({ "nodes": g.node_count(), "edges": g.edge_count() }))?;
        }
        Command::Filter { corpus, select: sel, sector, reftype, at, output } => {
            let mut m = RunManifest::start(
                "filter",
                seed,
                json!({ "corpus": corpus, "select": sel, "sector": sector, "reftype": reftype, "at": at }),
            );
            let sector = sector
                .map(Sector::from_code)
                .transpose()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let reftype = reftype
                .as_deref()
                .map(RefType::from_token)
                .transpose()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            let mut g = select(&loaded.graph, sel);
            if let Some(s) = sector {
                g = filter_sector(&g, s);
            }
            if let Some(r) = reftype {
                g = filter_reftype(&g, r);
            }
            if let Some(at) = at {
                g = snapshot(&g, SnapshotSpec::at(*at));
            }
            write_corpus(&g, output.as_deref())?;
            out()?.write_report("filter", m, json!({ "nodes": g.node_count(), "edges": g.edge_count() }))?;
        }
        Command::Metrics { corpus, select: sel, paths } => {
            let mut m = RunManifest::start("metrics", seed, json!({ "corpus": corpus, "select": sel, "paths": paths }));
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            let g = select(&loaded.graph, sel);
            let opts = PathOptions {
                mode: match paths.sources {
                    Some(sources) => PathMode::Sampled { sources, seed },
                    None => PathMode::Exact,
                },
                directed: paths.directed_paths,
            };
            let dir = out()?;
            let report = metrics_report(&g, &opts)?;
            write_metrics_csv(&dir, &g, &report.1)?;
            dir.write_report("metrics", m, report.0)?;
        }
        Command::Bowtie { corpus, select: sel, years, series } => {
            let mut m = RunManifest::start(
                "bowtie",
                seed,
                json!({ "corpus": corpus, "select": sel, "years": years, "series": series }),
            );
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            let g = select(&loaded.graph, sel);
            let d = decompose(&g).map_err(compute)?;
            let dir = out()?;
            let mut report = json!({ "nodes": g.node_count(), "decomposition": d });
            if *series {
                let (from, to) = resolve_years(&g, years.from_year, years.to_year)?;
                let points = core_gc_series(&annual_series(&g, from..=to));
                dir.write_csv(
                    "core_gc_series.csv",
                    &["year", "scc_fraction", "gc_fraction"],
                    points
                        .iter()
                        .map(|p| vec![p.year.to_string(), fmt9(p.scc_fraction), fmt9(p.gc_fraction)])
                        .collect(),
                )?;
                report["core_gc_series"] = to_value(&points);
            }
            dir.write_report("bowtie", m, report)?;
        }
        Command::Powerlaw { corpus, select: sel, fit, direction } => {
            let mut m = RunManifest::start(
                "powerlaw",
                seed,
                json!({ "corpus": corpus, "select": sel, "fit": fit, "direction": direction }),
            );
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            let g = select(&loaded.graph, sel);
            let degrees: Vec<u64> = g.degrees((*direction).into()).into_iter().map(|d| d as u64).collect();
            let result = fit_degrees(&degrees, fit, seed)?;
            let dir = out()?;
            dir.write_csv("ccdf.csv", &["series", "k", "fraction"], ccdf_rows(&degrees, &result))?;
            dir.write_report("powerlaw", m, json!({ "direction": direction, "fit": result }))?;
        }
        Command::Smallworld { corpus, select: sel, small_world } => {
            let mut m = RunManifest::start(
                "smallworld",
                seed,
                json!({ "corpus": corpus, "select": sel, "small_world": small_world }),
            );
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            let g = select(&loaded.graph, sel);
            let cfg = SmallWorldConfig {
                replicas: small_world.replicas,
                seed,
                length_factor: small_world.length_factor,
                clustering_factor: small_world.clustering_factor,
                sampled_above: small_world.sampled_above,
                sampled_sources: small_world.sampled_sources,
            };
            let report = small_world_compare(&g, &cfg).map_err(compute)?;
            out()?.write_report("smallworld", m, to_value(&report))?;
        }
        Command::Temporal { corpus, preset, years } => {
            let mut m = RunManifest::start("temporal", seed, json!({ "corpus": corpus, "preset": preset, "years": years }));
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            let g = &loaded.graph;
            let (from, to) = resolve_years(g, years.from_year, years.to_year)?;
            let presets: Vec<SubNetwork> = match preset {
                Some(p) => vec![*p],
                None => SubNetwork::ALL.to_vec(),
            };
            let mut networks = Vec::new();
            let mut rows = Vec::new();
            for p in presets {
                let series = evolution_series(&p.apply(g), from..=to);
                let fit = match densification_fit(&series) {
                    Ok(f) => to_value(&f),
                    Err(e) if preset.is_some() => return Err(compute(e)),
                    Err(e) => json!({ "error": lexnet::Error::from(e).to_string() }),
                };
                rows.extend(series.iter().map(|s| snapshot_row(p.label(), s)));
                networks.push(json!({ "network": p.label(), "densification": fit, "series": series }));
            }
            let dir = out()?;
            dir.write_csv("temporal.csv", &snapshot_header(), rows)?;
            dir.write_report("temporal", m, json!({ "from": from, "to": to, "networks": networks }))?;
        }
        Command::Resilience { corpus, select: sel, resilience } => {
            let mut m = RunManifest::start(
                "resilience",
                seed,
                json!({ "corpus": corpus, "select": sel, "resilience": resilience }),
            );
            let loaded = load(corpus)?;
            m.input_digest = Some(loaded.digest);
            let g = select(&loaded.graph, sel);
            let strategies: &[Strategy] = match resilience.strategy {
                StrategyArg::Random => &[Strategy::Random],
                StrategyArg::Targeted => &[Strategy::TargetedByDegree],
                StrategyArg::Both => &[Strategy::Random, Strategy::TargetedByDegree],
            };
            let mut curves = Vec::new();
            for &s in strategies {
                let cfg = resilience_config(resilience, s, seed);
                if resilience.no_null {
                    curves.push(("graph", simulate(&g, &cfg).map_err(compute)?));
                } else {
                    let (on_graph, null) = compare_with_null(&g, &cfg).map_err(compute)?;
                    curves.push(("graph", on_graph));
                    curves.push(("er_null", null));
                }
            }
            let dir = out()?;
            dir.write_csv("resilience.csv", &curve_header(), curve_rows("", &curves))?;
            dir.write_report("resilience", m, json!({ "nodes": g.node_count(), "curves": curves_json(&curves) }))?;
        }
        Command::ReportAll { .. } => report_all::run(cli)?,
    }
    Ok(())
}

fn write_corpus(g: &LegislationGraph, path: Option<&Path>) -> Result<(), CliError> {
    let records = export(g);
    write_stream(path, |w| write_jsonl(w, &records))
}

fn generator_config(args: &GeneratorArgs, seed: u64) -> Result<GeneratorConfig, CliError> {
    let mut c: GeneratorConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => GeneratorConfig::default(),
    };
    if let Some(v) = args.start_year {
        c.start_year = v;
    }
    if let Some(v) = args.end_year {
        c.end_year = v;
    }
    if let Some(d) = args.docs_per_year {
        c.docs_per_year = match args.growth_rate {
            Some(rate) => DocsSchedule::Growth { initial: d, rate },
            None => DocsSchedule::Constant(d),
        };
    }
    if let Some(v) = args.citations_per_doc {
        c.citations_per_doc = v;
    }
    if let Some(v) = args.densification_exponent {
        c.densification_exponent = v;
    }
    if let Some(v) = args.preferential_mixing {
        c.preferential_mixing = v;
    }
    if let Some(v) = args.triadic_closure {
        c.triadic_closure = v;
    }
    if let Some(v) = args.sunset_probability {
        c.sunset_probability = v;
    }
    if let Some(v) = args.sunset_horizon_years {
        c.sunset_horizon_years = v;
    }
    c.seed = seed;
    Ok(c)
}

/// The metrics report body plus the path metrics for the CSV side files.
pub(crate) fn metrics_report(g: &LegislationGraph, opts: &PathOptions) -> Result<(Value, Option<PathMetrics>), CliError> {
    let paths = path_metrics_with(g, opts).ok();
    let mut degree = serde_json::Map::new();
    let mut inequality = serde_json::Map::new();
    for (name, d) in [("in", Direction::In), ("out", Direction::Out), ("total", Direction::Total)] {
        degree.insert(name.into(), to_value(&degree_stats(g, d).map_err(compute)?));
        inequality.insert(name.into(), inequality_json(g, d)?);
    }
    let report = json!({
        "summary": network_summary(g, paths.as_ref()),
        "components": components(g),
        "degree": degree,
        "inequality": inequality,
        "paths": paths,
        "clustering": clustering(g),
        "assortativity": assortativity_json(g),
    });
    Ok((report, paths))
}

pub(crate) fn inequality_json(g: &LegislationGraph, d: Direction) -> Result<Value, CliError> {
    let lg = lorenz_gini(g, d).map_err(compute)?;
    Ok(json!({
        "gini": lg.gini,
        "top1_share": lg.top1_share,
        "pareto80_node_fraction": lg.pareto80_node_fraction,
        "all_zero": lg.all_zero,
        "lorenz": lg.resampled(100),
    }))
}

pub(crate) fn assortativity_json(g: &LegislationGraph) -> Value {
    let one = |c| match assortativity(g, c) {
        Ok(r) => json!(r),
        Err(e) => json!({ "error": lexnet::Error::from(e).to_string() }),
    };
    json!({ "degree": one(AssortativityCriterion::Degree), "sector": one(AssortativityCriterion::Sector) })
}

fn write_metrics_csv(dir: &OutDir, g: &LegislationGraph, paths: &Option<PathMetrics>) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for (name, d) in [("in", Direction::In), ("out", Direction::Out), ("total", Direction::Total)] {
        let stats = degree_stats(g, d).map_err(compute)?;
        rows.extend(stats.histogram.iter().map(|(k, c)| vec![name.to_owned(), k.to_string(), c.to_string()]));
    }
    dir.write_csv("degree_histogram.csv", &["direction", "degree", "count"], rows)?;
    if let Some(p) = paths {
        dir.write_csv(
            "distance_histogram.csv",
            &["distance", "pairs"],
            p.distance_histogram.iter().map(|(d, c)| vec![d.to_string(), c.to_string()]).collect(),
        )?;
    }
    let c = clustering(g);
    dir.write_csv(
        "clustering_by_degree.csv",
        &["degree", "nodes", "mean_clustering"],
        c.per_degree
            .iter()
            .map(|(k, v)| vec![k.to_string(), c.per_degree_counts[k].to_string(), fmt9(*v)])
            .collect(),
    )?;
    Ok(())
}

pub(crate) fn fit_options(fit: &FitArgs) -> FitOptions {
    FitOptions {
        estimator: match fit.estimator {
            EstimatorArg::Approximate => Estimator::Approximate,
            EstimatorArg::ExactZeta => Estimator::ExactZeta,
        },
        ..FitOptions::default()
    }
}

pub(crate) fn fit_degrees(degrees: &[u64], fit: &FitArgs, seed: u64) -> Result<FitResult, CliError> {
    let opts = fit_options(fit);
    let f = fit_power_law_with(degrees, &opts).map_err(compute)?;
    goodness_of_fit_with(degrees, &f, fit.m, seed, &opts).map_err(compute)
}

pub(crate) fn ccdf_rows(degrees: &[u64], r: &FitResult) -> Vec<Vec<String>> {
    let positive: Vec<u64> = degrees.iter().copied().filter(|&d| d > 0).collect();
    let empirical = ccdf(&positive);
    let fit = lexnet::powerlaw::PowerLawFit {
        gamma: r.gamma,
        x_min: r.x_min,
        n_tail: r.n_tail,
        ks_statistic: r.ks_statistic,
        n: r.n,
        zeros_excluded: r.zeros_excluded,
    };
    let ks: Vec<u64> = empirical.iter().map(|p| p.0).collect();
    let fitted = fitted_ccdf(&fit, &ks);
    empirical
        .iter()
        .map(|(k, f)| ("empirical", k, f))
        .chain(fitted.iter().map(|(k, f)| ("fitted", k, f)))
        .map(|(s, k, f)| vec![s.to_owned(), k.to_string(), fmt9(*f)])
        .collect()
}

pub(crate) fn snapshot_header() -> Vec<&'static str> {
    let mut h = vec!["network", "year", "N", "E"];
    h.extend(Sector::ALL.iter().map(|s| s.name()));
    h.extend(RefType::ALL.iter().map(|r| r.token()));
    h.extend(["scc_fraction", "gc_fraction"]);
    h
}

pub(crate) fn snapshot_row(network: &str, s: &SnapshotStat) -> Vec<String> {
    let mut row = vec![network.to_owned(), s.year.to_string(), s.nodes.to_string(), s.edges.to_string()];
    row.extend(s.per_sector.values().map(|c| c.to_string()));
    row.extend(s.per_reftype.values().map(|c| c.to_string()));
    row.push(fmt9(s.scc_fraction));
    row.push(fmt9(s.gc_fraction));
    row
}

pub(crate) fn resilience_config(args: &ResilienceArgs, strategy: Strategy, seed: u64) -> ResilienceConfig {
    ResilienceConfig {
        strategy,
        step_fraction: args.step,
        repetitions: if strategy == Strategy::Random { args.reps } else { 1 },
        degree_mode: match args.degree_mode {
            DegreeModeArg::Static => DegreeMode::StaticInitial,
            DegreeModeArg::Adaptive => DegreeMode::AdaptiveRecompute,
        },
        seed,
        stop_at: args.stop_at,
    }
}

pub(crate) fn curve_header() -> Vec<&'static str> {
    vec![
        "network",
        "graph",
        "strategy",
        "removed",
        "fraction_removed",
        "gc_fraction_of_remaining",
        "gc_fraction_of_original",
    ]
}

pub(crate) fn curve_rows(network: &str, curves: &[(&str, ResilienceCurve)]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (which, c) in curves {
        for p in &c.points {
            rows.push(vec![
                network.to_owned(),
                (*which).to_owned(),
                c.strategy.name().to_owned(),
                p.removed.to_string(),
                fmt9(p.fraction_removed),
                fmt9(p.gc_fraction_of_remaining),
                fmt9(p.gc_fraction_of_original),
            ]);
        }
    }
    rows
}

pub(crate) fn curves_json(curves: &[(&str, ResilienceCurve)]) -> Value {
    Value::Array(
        curves
            .iter()
            .map(|(which, c)| {
                json!({
                    "graph": which,
                    "strategy": c.strategy,
                    "averaged_over": c.averaged_over,
                    "area_under_curve": c.area_under_curve(),
                    "points": c.points,
                })
            })
            .collect(),
    )
}
