use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn lexnet() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lexnet"));
    c.env_remove("LEXNET_OUT_DIR");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    lexnet().current_dir(dir).args(args).output().expect("binary runs")
}

fn run_with_stdin(dir: &Path, args: &[&str], stdin: &[u8]) -> Output {
    let mut child = lexnet()
        .current_dir(dir)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn corpus(dir: &Path, seed: u64) -> PathBuf {
    let path = dir.join(format!("corpus-{seed}.jsonl"));
    let out = run(
        dir,
        &[
            "generate",
            "--seed",
            &seed.to_string(),
            "--start-year",
            "1980",
            "--end-year",
            "1995",
            "--docs-per-year",
            "40",
            "--output",
            path.to_str().unwrap(),
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn body(path: &Path) -> Value {
    report(path)["report"].clone()
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    assert_eq!(run(dir, &["--help"]).status.code(), Some(0));
    assert_eq!(run(dir, &["metrics", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(dir, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir, &["--threads", "0", "ingest", "--input", "x"]).status.code(), Some(2));
    assert_eq!(run(dir, &["generate", "--growth-rate", "0.1"]).status.code(), Some(2));

    let missing = run(dir, &["ingest", "--input", "no-such-file.jsonl"]);
    assert_eq!(missing.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("no-such-file.jsonl"));

    let dangling = r#"{"id":"A","sector":3,"date_of_effect":"1990-01-01","references":[{"target":"B","type":"legal_basis"}]}"#;
    fs::write(dir.join("dangling.jsonl"), dangling).unwrap();
    let strict = run(dir, &["ingest", "--input", "dangling.jsonl"]);
    assert_eq!(strict.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("corpus-io"));
    assert_eq!(run(dir, &["ingest", "--input", "dangling.jsonl", "--mode", "lenient"]).status.code(), Some(0));

    // too few observations for a fit
    let fail = run(dir, &["powerlaw", "--input", "dangling.jsonl", "--mode", "lenient", "--m", "5"]);
    assert_eq!(fail.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&fail.stderr).contains("heavytail-fit"), "{}", String::from_utf8_lossy(&fail.stderr));
}

#[test]
fn generate_is_byte_identical_per_seed() {
    let tmp = TempDir::new().unwrap();
    let a = fs::read(corpus(tmp.path(), 5)).unwrap();
    let b = run(tmp.path(), &["generate", "--seed", "5", "--start-year", "1980", "--end-year", "1995", "--docs-per-year", "40"]);
    assert_eq!(a, b.stdout);
    assert_ne!(a, fs::read(corpus(tmp.path(), 6)).unwrap());
}

#[test]
fn pipeline_reports_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let bytes = fs::read(corpus(tmp.path(), 42)).unwrap();
    let mut bodies = Vec::new();
    for name in ["one", "two"] {
        let out_dir = tmp.path().join(name);
        let out = run_with_stdin(
            tmp.path(),
            &["--out-dir", out_dir.to_str().unwrap(), "metrics", "--sources", "64"],
            &bytes,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let full = report(&out_dir.join("metrics.json"));
        let manifest = &full["manifest"];
        assert_eq!(manifest["command"], "metrics");
        assert_eq!(manifest["seed"], 0);
        assert_eq!(manifest["input_digest"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
        assert!(manifest["started"].as_str().unwrap() <= manifest["finished"].as_str().unwrap());
        bodies.push(fs::read_to_string(out_dir.join("metrics.json")).unwrap());
    }
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        let m = v["manifest"].as_object_mut().unwrap();
        m.remove("started");
        m.remove("finished");
        v
    };
    assert_eq!(strip(&bodies[0]), strip(&bodies[1]));
}

#[test]
fn sector_filter_then_metrics_is_the_regulations_network() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let input = corpus(dir, 9);
    let input = input.to_str().unwrap();
    let rn = dir.join("rn.jsonl");
    assert!(run(dir, &["filter", "--input", input, "--sector", "3", "--output", rn.to_str().unwrap()]).status.success());
    assert!(run(dir, &["--out-dir", "a", "metrics", "--input", rn.to_str().unwrap()]).status.success());
    assert!(run(dir, &["--out-dir", "b", "metrics", "--input", input, "--preset", "RN"]).status.success());
    assert_eq!(body(&dir.join("a/metrics.json")), body(&dir.join("b/metrics.json")));
}

#[test]
fn out_dir_from_environment() {
    let tmp = TempDir::new().unwrap();
    let input = corpus(tmp.path(), 1);
    let out = lexnet()
        .current_dir(tmp.path())
        .env("LEXNET_OUT_DIR", tmp.path().join("env-out"))
        .args(["ingest", "--input", input.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let r = body(&tmp.path().join("env-out/ingest.json"));
    assert!(r["nodes"].as_u64().unwrap() >= 640);
}

fn check_floats(v: &Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            assert_eq!(lexnet_cli::round9(x), x, "{x} has more than 9 significant digits");
        }
        Value::Array(a) => a.iter().for_each(check_floats),
        Value::Object(o) => o.values().for_each(check_floats),
        _ => {}
    }
}

#[test]
fn every_analysis_writes_its_report() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let input = corpus(dir, 11);
    let input = input.to_str().unwrap();
    let runs: [(&str, &[&str], &[&str]); 6] = [
        ("ingest", &["ingest"], &[]),
        ("bowtie", &["bowtie", "--series"], &["core_gc_series.csv"]),
        ("powerlaw", &["powerlaw", "--m", "20", "--direction", "total"], &["ccdf.csv"]),
        ("smallworld", &["smallworld", "--replicas", "2"], &[]),
        ("temporal", &["temporal"], &["temporal.csv"]),
        ("resilience", &["resilience", "--reps", "10", "--step", "0.1"], &["resilience.csv"]),
    ];
    for (name, args, side_files) in runs {
        let mut full = vec!["--seed", "3"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--input", input]);
        let out = run(dir, &full);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let doc = report(&dir.join(format!("{name}.json")));
        assert_eq!(doc["manifest"]["command"], name);
        assert_eq!(doc["manifest"]["seed"], 3);
        check_floats(&doc);
        for f in side_files {
            let mut rdr = csv::Reader::from_path(dir.join(f)).unwrap();
            let width = rdr.headers().unwrap().len();
            let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
            assert!(!rows.is_empty(), "{f} is empty");
            assert!(rows.iter().all(|r| r.len() == width));
        }
    }
    let sw = body(&dir.join("smallworld.json"));
    for key in ["L_net", "C_net", "L_rand", "C_rand", "small_world_verdict"] {
        assert!(!sw[key].is_null(), "missing {key}");
    }
    let pl = body(&dir.join("powerlaw.json"));
    assert_eq!(pl["fit"]["bootstrap_m"], 20);
    assert!(pl["fit"]["gamma"].as_f64().unwrap() > 1.0);
}

#[test]
fn csv_corpus_input() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("docs.csv"),
        "id,sector,date_of_effect,date_of_expiry\n370L0220,3,1970-03-20,\n383L0351,3,1983-06-16,\n",
    )
    .unwrap();
    fs::write(dir.join("edges.csv"), "source,target,type\n383L0351,370L0220,amendment_to\n").unwrap();
    let out = run(dir, &["ingest", "--format", "csv", "--input", "docs.csv", "--edges", "edges.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = body(&dir.join("ingest.json"));
    assert_eq!(r["nodes"], 2);
    assert_eq!(r["edges"], 2);
    assert_eq!(r["reciprocals_added"], 1);
    assert_eq!(run(dir, &["ingest", "--format", "csv", "--input", "docs.csv"]).status.code(), Some(2));
}
