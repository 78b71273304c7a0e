use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

/// Provenance block embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the input corpus bytes, hex encoded.
    pub input_digest: Option<String>,
    pub config: Value,
    pub seed: u64,
    pub tool_version: String,
    pub started: String,
    pub finished: String,
}

impl RunManifest {
    pub fn start(command: &str, seed: u64, config: Value) -> Self {
        RunManifest {
            command: command.to_owned(),
            input_digest: None,
            config,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            started: now(),
            finished: String::new(),
        }
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Rounds to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

pub fn fmt9(x: f64) -> String {
    round9(x).to_string()
}

/// Rounds every float in `v` to 9 significant digits, in place.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = serde_json::Number::from_f64(round9(x)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))?;
        Ok(OutDir { dir: dir.to_owned() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Writes `{manifest, report}` as `<name>.json`.
    pub fn write_report(&self, name: &str, mut manifest: RunManifest, report: Value) -> Result<PathBuf, CliError> {
        manifest.finished = now();
        let mut doc = json!({ "manifest": manifest, "report": report });
        round_floats(&mut doc);
        let path = self.path(&format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(&doc).expect("value serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| write_error(&path, e))?;
        eprintln!("wrote {}", path.display());
        Ok(path)
    }

    /// Writes an RFC 4180 CSV file with the given header and rows.
    pub fn write_csv(&self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let write = || -> Result<(), csv::Error> {
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
            Ok(())
        };
        write().map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
        Ok(path)
    }
}

pub fn write_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("cannot write {}: {e}", path.display()))
}

/// Writes to `path`, or standard output when absent.
pub fn write_stream(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<(), lexnet::corpus::CorpusError>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = fs::File::create(p).map_err(|e| write_error(p, e))?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = std::io::BufWriter::new(stdout.lock());
            f(&mut w).map_err(|e| CliError::Data(format!("stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(round9(1.0 / 3.0), 0.333333333);
        assert_eq!(round9(123456789012.0), 123456789000.0);
        assert_eq!(round9(0.0), 0.0);
        assert_eq!(round9(-2.0 / 3.0 * 1e-7), -6.66666667e-8);
        let mut v = json!({"a": [0.1234567891234, 2], "b": {"c": 7.0}});
        round_floats(&mut v);
        assert_eq!(v.to_string(), r#"{"a":[0.123456789,2],"b":{"c":7.0}}"#);
    }
}
