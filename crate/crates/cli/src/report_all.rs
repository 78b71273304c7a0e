//! The full battery over LN, RN, ICN and LBN: basic properties (whole and
//! active versions), bow-tie and its yearly core/giant-component series,
//! degree inequality, degree distributions with power-law fits, paths and
//! clustering, small-world comparison, assortativity, yearly evolution with
//! densification fits, and resilience curves against matched random graphs.
//!
//! An analysis that is undefined for one network (too few observations,
//! zero variance, ...) is recorded as `{"error": ...}` in place and listed
//! under `errors`; the rest of the battery still runs.

use lexnet::bowtie::{core_gc_series, decompose};
use lexnet::filters::{annual_series, snapshot, SnapshotSpec, SubNetwork};
use lexnet::metrics::{clustering, degree_stats, giant_component, network_summary, path_metrics_with, PathMode, PathOptions};
use lexnet::random::{small_world_compare, SmallWorldConfig};
use lexnet::resilience::{compare_with_null, Strategy};
use lexnet::temporal::{densification_fit, evolution_series};
use lexnet::{Direction, LegislationGraph};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Command, DegreeModeArg, ResilienceArgs, StrategyArg};
use crate::commands::{
    assortativity_json, ccdf_rows, curve_header, curve_rows, curves_json, fit_degrees, inequality_json,
    resilience_config, snapshot_header, snapshot_row,
};
use crate::input::{load, resolve_years};
use crate::output::{to_value, OutDir, RunManifest};
use crate::CliError;

struct Battery {
    errors: Vec<String>,
}

impl Battery {
    fn record<T: Serialize, E: Into<lexnet::Error>>(&mut self, what: String, r: Result<T, E>) -> Value {
        match r {
            Ok(v) => to_value(&v),
            Err(e) => {
                let msg = e.into().to_string();
                eprintln!("warning: {what}: {msg}");
                self.errors.push(format!("{what}: {msg}"));
                json!({ "error": msg })
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let Command::ReportAll { corpus, current, years, fit, reps, step, sw_replicas, sampled_above, sources } =
        &cli.command
    else {
        unreachable!("dispatched on report-all");
    };
    let seed = cli.global.seed;
    let mut manifest = RunManifest::start(
        "report-all",
        seed,
        json!({
            "corpus": corpus,
            "current": current,
            "years": years,
            "fit": fit,
            "reps": reps,
            "step": step,
            "sw_replicas": sw_replicas,
            "sampled_above": sampled_above,
            "sources": sources,
        }),
    );
    let loaded = load(corpus)?;
    manifest.input_digest = Some(loaded.digest);
    let g = &loaded.graph;
    let (from, to) = resolve_years(g, years.from_year, years.to_year)?;
    let current = match current {
        Some(d) => *d,
        None => g
            .documents()
            .iter()
            .map(|d| d.date_of_effect)
            .max()
            .ok_or_else(|| CliError::Usage("empty corpus".into()))?,
    };
    let active = snapshot(g, SnapshotSpec::at(current));
    let path_opts = |h: &LegislationGraph, label: &str| PathOptions {
        mode: if giant_component(h).len() > *sampled_above {
            PathMode::Sampled { sources: *sources, seed: lexnet::seed::derive_seed(seed, label, 0) }
        } else {
            PathMode::Exact
        },
        directed: false,
    };
    let resilience_args = ResilienceArgs {
        strategy: StrategyArg::Both,
        step: *step,
        reps: *reps,
        degree_mode: DegreeModeArg::Static,
        stop_at: 0.99,
        no_null: false,
    };

    let mut b = Battery { errors: Vec::new() };
    let mut sections: [Vec<Value>; 9] = Default::default();
    let mut ccdf_csv = Vec::new();
    let mut evolution_csv = Vec::new();
    let mut resilience_csv = Vec::new();

    for preset in SubNetwork::ALL {
        let label = preset.label();
        eprintln!("analysing {label}");
        let net = preset.apply(g);
        let net_now = preset.apply(&active);

        // basic properties, whole and active
        let opts = path_opts(&net, &format!("paths/{label}"));
        let paths = path_metrics_with(&net, &opts).ok();
        let opts_now = path_opts(&net_now, &format!("paths-current/{label}"));
        let paths_now = path_metrics_with(&net_now, &opts_now).ok();
        sections[0].push(json!({
            "network": label,
            "whole": network_summary(&net, paths.as_ref()),
            "current": network_summary(&net_now, paths_now.as_ref()),
        }));

        // bow-tie and yearly core / giant component
        let bowtie = b.record(format!("{label} bow-tie"), decompose(&net));
        let series = core_gc_series(&annual_series(&net, from..=to));
        sections[1].push(json!({ "network": label, "decomposition": bowtie, "core_gc_series": series }));

        // inequality
        let mut ineq = serde_json::Map::new();
        for (name, d) in [("in", Direction::In), ("out", Direction::Out)] {
            let v = inequality_json(&net, d).unwrap_or_else(|e| {
                b.errors.push(format!("{label} {name} inequality: {e}"));
                json!({ "error": e.to_string() })
            });
            ineq.insert(name.into(), v);
        }
        sections[2].push(json!({ "network": label, "inequality": ineq }));

        // degree distributions and power-law fits
        let mut dists = serde_json::Map::new();
        for (name, d) in [("in", Direction::In), ("out", Direction::Out)] {
            let stats = b.record(format!("{label} {name} degree"), degree_stats(&net, d));
            let degrees: Vec<u64> = net.degrees(d).into_iter().map(|x| x as u64).collect();
            let fitted = match fit_degrees(&degrees, fit, seed) {
                Ok(r) => {
                    ccdf_csv.extend(ccdf_rows(&degrees, &r).into_iter().map(|mut row| {
                        row.splice(0..0, [label.to_owned(), name.to_owned()]);
                        row
                    }));
                    to_value(&r)
                }
                Err(e) => {
                    b.errors.push(format!("{label} {name} power law: {e}"));
                    json!({ "error": e.to_string() })
                }
            };
            dists.insert(name.into(), json!({ "stats": stats, "power_law": fitted }));
        }
        sections[3].push(json!({ "network": label, "distributions": dists }));

        // paths and hierarchical clustering
        sections[4].push(json!({ "network": label, "paths": paths, "clustering": clustering(&net) }));

        // small world, on the whole and the active network
        let sw_cfg = SmallWorldConfig {
            replicas: *sw_replicas,
            seed,
            sampled_above: *sampled_above,
            sampled_sources: *sources,
            ..SmallWorldConfig::default()
        };
        let sw_whole = b.record(format!("{label} small world"), small_world_compare(&net, &sw_cfg));
        let sw_now = b.record(format!("{label} current small world"), small_world_compare(&net_now, &sw_cfg));
        sections[5].push(json!({ "network": label, "whole": sw_whole, "current": sw_now }));

        // assortativity
        sections[6].push(json!({ "network": label, "assortativity": assortativity_json(&net) }));

        // yearly evolution and densification
        let evo = evolution_series(&net, from..=to);
        evolution_csv.extend(evo.iter().map(|s| snapshot_row(label, s)));
        let dens = b.record(format!("{label} densification"), densification_fit(&evo));
        sections[7].push(json!({ "network": label, "densification": dens, "series": evo }));

        // resilience on the active network against a matched random graph
        let mut curves = Vec::new();
        for s in [Strategy::Random, Strategy::TargetedByDegree] {
            match compare_with_null(&net_now, &resilience_config(&resilience_args, s, seed)) {
                Ok((on_graph, null)) => {
                    curves.push(("graph", on_graph));
                    curves.push(("er_null", null));
                }
                Err(e) => {
                    b.errors.push(format!("{label} resilience: {}", lexnet::Error::from(e)));
                }
            }
        }
        resilience_csv.extend(curve_rows(label, &curves));
        sections[8].push(json!({ "network": label, "curves": curves_json(&curves) }));
    }

    let [basic, bowtie, inequality, distributions, paths, small_world, assortativity, evolution, resilience] = sections;
    let report = json!({
        "current_date": current,
        "years": [from, to],
        "basic_properties": basic,
        "bowtie": bowtie,
        "inequality": inequality,
        "degree_distributions": distributions,
        "paths_and_clustering": paths,
        "small_world": small_world,
        "assortativity": assortativity,
        "evolution": evolution,
        "resilience": resilience,
        "errors": b.errors,
    });

    let dir = OutDir::new(&cli.global.out_dir)?;
    let mut ccdf_header = vec!["network", "direction"];
    ccdf_header.extend(["series", "k", "fraction"]);
    dir.write_csv("report-all_ccdf.csv", &ccdf_header, ccdf_csv)?;
    dir.write_csv("report-all_evolution.csv", &snapshot_header(), evolution_csv)?;
    dir.write_csv("report-all_resilience.csv", &curve_header(), resilience_csv)?;
    dir.write_report("report-all", manifest, report)?;
    Ok(())
}
