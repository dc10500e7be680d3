//! Rendering of run results as CSV (one file per table, header row, leading
//! metadata comment) or JSON (one document). Cell formatting uses the
//! shortest round-trip float representation, so identical runs produce
//! byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

/// One typed cell; formatting is centralized so CSV and JSON agree.
#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    U(u64),
    Str(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => fmt_f64(*v),
            Cell::U(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) if v.is_finite() => json!(v),
            Cell::F(v) => json!(fmt_f64(*v)),
            Cell::U(v) => json!(v),
            Cell::Str(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v}")
    }
}

#[derive(Debug)]
pub struct Table {
    /// Suffix used when a command writes more than one file.
    pub name: &'static str,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug)]
pub struct RunOutput {
    pub command: &'static str,
    /// Fully resolved configuration, in a fixed order.
    pub meta: Vec<(&'static str, String)>,
    pub tables: Vec<Table>,
}

impl RunOutput {
    fn meta_line(&self) -> String {
        let pairs: Vec<String> = self
            .meta
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "# quadsync {} {} {}",
            env!("CARGO_PKG_VERSION"),
            self.command,
            pairs.join(" ")
        )
    }

    fn table_csv(&self, table: &Table) -> String {
        let mut s = String::new();
        s.push_str(&self.meta_line());
        s.push('\n');
        s.push_str(&table.columns.join(","));
        s.push('\n');
        for row in &table.rows {
            debug_assert_eq!(row.len(), table.columns.len());
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn to_json(&self) -> Value {
        let mut meta = Map::new();
        meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        meta.insert("command".into(), json!(self.command));
        for (k, v) in &self.meta {
            meta.insert((*k).into(), json!(v));
        }
        let tables: Map<String, Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = t
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, cell)| ((*c).to_string(), cell.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                (t.name.to_string(), json!({ "columns": t.columns, "rows": rows }))
            })
            .collect();
        json!({ "meta": Value::Object(meta), "tables": Value::Object(tables) })
    }
}

/// For multi-table outputs, `rows.csv` becomes `rows.<name>.csv` per table.
fn table_path(base: &Path, name: &str, multi: bool) -> PathBuf {
    if !multi {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    base.with_file_name(format!("{stem}.{name}.{ext}"))
}

/// Write the run result to `path` (or stdout when absent) in the requested
/// format. CSV writes one file per table; JSON always writes one document.
pub fn write_output(out: &RunOutput, path: Option<&Path>, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let text = format!("{:#}\n", out.to_json());
            match path {
                Some(p) => std::fs::write(p, text)?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
        }
        Format::Csv => {
            let multi = out.tables.len() > 1;
            for table in &out.tables {
                let text = out.table_csv(table);
                match path {
                    Some(p) => std::fs::write(table_path(p, table.name, multi), text)?,
                    None => std::io::stdout().write_all(text.as_bytes())?,
                }
            }
        }
    }
    Ok(())
}
