//! Report rendering.
//!
//! CSV files open with `#` comment lines carrying the tool version, the
//! command and its resolved configuration, followed by a snake_case header.
//! Floats are written with 17 significant digits, missing values as empty
//! cells. JSON output holds the same metadata and records. Wall-clock time
//! is kept out of both so that identical configurations give identical
//! bytes; it goes to a `<file>.meta.json` sidecar instead.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::{json, Map, Value};

use crate::error::CliError;

pub const TOOL: &str = "pfa-tqft";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PFA_TQFT_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Rows of one experiment with the configuration that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub rows: Vec<Map<String, Value>>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            command: command.to_string(),
            config,
            rows: Vec::new(),
        }
    }

    /// Appends a record; `row` must be a JSON object.
    pub fn push(&mut self, row: Value) {
        match row {
            Value::Object(map) => self.rows.push(map),
            other => panic!("report rows must be objects, got {other}"),
        }
    }

    pub fn columns(&self) -> Vec<&str> {
        self.rows
            .first()
            .map(|r| r.keys().map(String::as_str).collect())
            .unwrap_or_default()
    }

    /// Column values as floats, skipping empty cells.
    pub fn column_f64(&self, name: &str) -> Vec<Option<f64>> {
        self.rows
            .iter()
            .map(|r| r.get(name).and_then(Value::as_f64))
            .collect()
    }

    fn meta(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "config": self.config,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let doc = json!({ "meta": self.meta(), "rows": self.rows });
                Ok(serde_json::to_string_pretty(&doc).expect("report is valid JSON") + "\n")
            }
        }
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut out = format!(
            "# {TOOL} {VERSION}\n# command: {}\n# config: {}\n",
            self.command, self.config
        );
        let columns = self.columns();
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Usage(format!("csv encoding failed: {e}"));
        w.write_record(&columns).map_err(csv_err)?;
        for row in &self.rows {
            if row.len() != columns.len() || row.keys().zip(&columns).any(|(k, c)| k != c) {
                return Err(CliError::Usage(format!(
                    "{}: rows do not share one schema",
                    self.command
                )));
            }
            w.write_record(row.values().map(cell)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        out.push_str(std::str::from_utf8(&bytes).expect("csv output is utf-8"));
        Ok(out)
    }
}

/// CSV rendering of one value.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Where a command writes its report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

impl Destination {
    /// `--out` if given, else `<PFA_TQFT_OUT_DIR>/<stem>.<ext>` when the
    /// variable is set, else stdout. `-` forces stdout.
    pub fn resolve(out: Option<&Path>, stem: &str, format: Format) -> Self {
        match out {
            Some(p) if p == Path::new("-") => Destination::Stdout,
            Some(p) => Destination::File(p.to_path_buf()),
            None => match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if !dir.is_empty() => Destination::File(
                    Path::new(&dir).join(format!("{stem}.{}", format.extension())),
                ),
                _ => Destination::Stdout,
            },
        }
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent.display(), e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path.display(), e))
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

/// Run metadata including wall-clock time; not byte-stable by design.
pub fn run_meta(command: &str, config: &Value, runtime: Duration) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "config": config,
        "runtime_s": runtime.as_secs_f64(),
    })
}

/// Emits `text` to `dest`; for files also writes the sidecar metadata.
pub fn emit(dest: &Destination, text: &str, meta: &Value) -> Result<(), CliError> {
    match dest {
        Destination::Stdout => {
            print!("{text}");
            log::info!("{meta}");
            Ok(())
        }
        Destination::File(path) => {
            write_file(path, text)?;
            let meta = serde_json::to_string_pretty(meta).expect("meta is valid JSON") + "\n";
            write_file(&sidecar_path(path), &meta)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", json!({"m": 4, "label": "x"}));
        r.push(json!({"m": 4, "value": 0.5, "ratio": f64::NAN, "name": "a,b", "ok": true}));
        r.push(json!({"m": 5, "value": 1.0 / 3.0, "ratio": 0.25, "name": "c", "ok": false}));
        r
    }

    #[test]
    fn csv_layout() {
        let text = sample().render(Format::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# pfa-tqft {VERSION}"));
        assert_eq!(lines[1], "# command: demo");
        assert_eq!(lines[2], r#"# config: {"m":4,"label":"x"}"#);
        assert_eq!(lines[3], "m,value,ratio,name,ok");
        assert_eq!(lines[4], "4,5.0000000000000000e-1,,\"a,b\",true");
        assert_eq!(
            lines[5],
            "5,3.3333333333333331e-1,2.5000000000000000e-1,c,false"
        );
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-300, 6.02214076e23] {
            let s = cell(&json!(x));
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_layout() {
        let text = sample().render(Format::Json).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["meta"]["command"], "demo");
        assert_eq!(v["rows"][0]["ratio"], Value::Null);
        assert_eq!(v["rows"][1]["m"], 5);
    }

    #[test]
    fn mismatched_rows_rejected() {
        let mut r = Report::new("demo", json!({}));
        r.push(json!({"a": 1}));
        r.push(json!({"b": 1}));
        assert!(r.render(Format::Csv).is_err());
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            sidecar_path(Path::new("out/tvd.csv")),
            PathBuf::from("out/tvd.csv.meta.json")
        );
    }
}
