//! Tabular output with a metadata header, as CSV, JSON or SVG plus a CSV twin.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::svg;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
const CONFIG_PREFIX: &str = "# config: ";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Missing,
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Real(v) => Some(v),
            Cell::Missing => None,
        }
    }

    fn csv_text(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => real(v),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) => json!(v),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Cell {
        v.map_or(Cell::Missing, Cell::Real)
    }
}

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Which columns to draw and how rows split into curves.
#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub title: String,
    pub x: &'static str,
    pub ys: Vec<&'static str>,
    /// Rows sharing these column values form one curve.
    pub group: Vec<&'static str>,
}

#[derive(Debug, Clone)]
pub struct SeriesFile {
    pub config: RunConfig,
    pub notes: Vec<String>,
    pub scalars: Vec<(String, f64)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub plot: PlotSpec,
}

impl SeriesFile {
    pub fn new(config: &RunConfig, columns: Vec<&'static str>, plot: PlotSpec) -> Self {
        SeriesFile { config: config.clone(), notes: Vec::new(), scalars: Vec::new(), columns, rows: Vec::new(), plot }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let c = &self.config;
        let mut out = String::new();
        out.push_str(&format!("# nlsearch {VERSION}\n"));
        let config = serde_json::to_string(c).map_err(|e| CliError::Domain(e.to_string()))?;
        out.push_str(&format!("{CONFIG_PREFIX}{config}\n"));
        out.push_str(&format!("# command: {}\n", serde_json::to_value(c.command).unwrap().as_str().unwrap()));
        out.push_str(&format!("# kind: {}\n", c.kind));
        out.push_str(&format!("# epsilon: {}\n", real(c.epsilon)));
        out.push_str(&format!("# tol: {}\n", real(c.tol)));
        for note in &self.notes {
            out.push_str(&format!("# note: {note}\n"));
        }
        for (name, v) in &self.scalars {
            out.push_str(&format!("# {name}: {}\n", real(*v)));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Domain(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text)).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Domain(format!("csv: {e}")))?;
        out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let scalars: serde_json::Map<String, Value> = self.scalars.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "meta": {
                "version": VERSION,
                "config": self.config,
                "notes": self.notes,
                "scalars": scalars,
            },
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Writes in the configured format. SVG output also writes a CSV beside it.
    pub fn write(&self) -> Result<Vec<PathBuf>, CliError> {
        let out = self.config.out.as_deref();
        match (self.config.format, out) {
            (Format::Csv, _) => emit(out, &self.to_csv()?),
            (Format::Json, _) => emit(out, &(serde_json::to_string_pretty(&self.to_json()).unwrap() + "\n")),
            (Format::Svg, None) => Err(CliError::Domain("svg output needs --out".into())),
            (Format::Svg, Some(path)) => {
                let twin = path.with_extension("csv");
                if twin == path {
                    return Err(CliError::Domain("svg output path must not end in .csv".into()));
                }
                let mut written = emit(Some(&twin), &self.to_csv()?)?;
                written.extend(emit(Some(path), &svg::render(self))?);
                Ok(written)
            }
        }
    }
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<Vec<PathBuf>, CliError> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::io(p, e))?;
            Ok(vec![p.to_path_buf()])
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            Ok(Vec::new())
        }
    }
}

/// Recovers the embedded configuration from a CSV or JSON output file.
pub fn read_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |m: String| CliError::Domain(format!("{}: {m}", path.display()));
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let config = v.get("meta").and_then(|m| m.get("config")).ok_or_else(|| bad("no meta.config".into()))?;
        return serde_json::from_value(config.clone()).map_err(|e| bad(e.to_string()));
    }
    let line = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix(CONFIG_PREFIX))
        .ok_or_else(|| bad("no `# config:` header line".into()))?;
    serde_json::from_str(line).map_err(|e| bad(e.to_string()))
}

/// Column names and numeric rows of a CSV output file. Empty cells read as `None`.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>), CliError> {
    let bad = |m: String| CliError::Domain(format!("{}: {m}", path.display()));
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let columns = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let row = rec
            .iter()
            .map(|s| if s.is_empty() { Ok(None) } else { s.parse::<f64>().map(Some) })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        rows.push(row);
    }
    Ok((columns, rows))
}
