//! Tabular reports written as CSV or JSON lines.
//!
//! Every CSV file starts with a `schema_version` column and every JSON line
//! carries `schema_version` and `table` keys. Floats use the shortest
//! round-trip representation, so a report is byte-stable for fixed inputs.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::config::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn to_field(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }

    /// Value of `column` in `row`, for tests and summaries.
    pub fn get(&self, row: usize, column: &str) -> Option<&Cell> {
        let c = self.columns.iter().position(|n| *n == column)?;
        self.rows.get(row)?.get(c)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["schema_version"];
        header.extend(&self.columns);
        w.write_record(&header)?;
        let version = SCHEMA_VERSION.to_string();
        for row in &self.rows {
            let mut record = vec![version.clone()];
            record.extend(row.iter().map(Cell::to_field));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in &self.rows {
            let mut obj = Map::new();
            obj.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
            obj.insert("table".into(), Value::from(self.name));
            for (name, cell) in self.columns.iter().zip(row) {
                obj.insert((*name).into(), cell.to_json());
            }
            serde_json::to_writer(&mut out, &Value::Object(obj))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out).map_err(std::io::Error::other),
            Format::Jsonl => self.write_jsonl(out),
        }
    }
}

/// Writes each table to `<dir>/<table>.<ext>`, or all of them to `stdout`
/// with a `# <table>` line before each.
pub fn emit(tables: &[Table], format: Format, dir: Option<&Path>) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for t in tables {
                let path = dir.join(format!("{}.{}", t.name, format.extension()));
                let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
                t.write(format, file)?;
                written.push(path);
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for t in tables {
                writeln!(lock, "# {}", t.name)?;
                t.write(format, &mut lock)?;
            }
        }
    }
    Ok(written)
}
