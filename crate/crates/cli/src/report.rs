//! Tabular command output rendered as CSV or JSON.
//!
//! CSV: `#` comment lines (tool, command, model, inputs, notes), then a header
//! whose entries carry units as `name [unit]`, then rows. `.` decimal point,
//! `,` delimiter, LF line endings.

use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Floating point, written in shortest round-trip exponent form.
    Num(f64),
    /// Floating point with a fixed number of decimals.
    Fixed(f64, usize),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Fixed(v, d) => format!("{v:.d$}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) | Cell::Fixed(v, _) if !v.is_finite() => Value::String(fmt_num(*v)),
            Cell::Num(v) => json!(v),
            Cell::Fixed(v, d) => {
                // Round through the decimal text so JSON shows what CSV shows.
                let s = format!("{v:.d$}");
                json!(s.parse::<f64>().unwrap_or(*v))
            }
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:e}")
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }

    fn header(&self) -> String {
        if self.unit.is_empty() {
            self.name.clone()
        } else {
            format!("{} [{}]", self.name, self.unit)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub model: String,
    pub inputs: Vec<(String, Cell)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, model: impl Into<String>) -> Self {
        Self {
            command,
            model: model.into(),
            inputs: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Cell>) {
        self.inputs.push((key.to_string(), value.into()));
    }

    pub fn columns(&mut self, cols: &[(&str, &str)]) {
        self.columns = cols.iter().map(|(n, u)| Column::new(n, u)).collect();
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = format!(
            "# pll {} {} model={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.model
        );
        if !self.inputs.is_empty() {
            let inputs: Vec<String> = self
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={}", v.to_csv()))
                .collect();
            out.push_str(&format!("# inputs: {}\n", inputs.join(" ")));
        }
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Failure(format!("writing CSV: {e}"));
        w.write_record(self.columns.iter().map(Column::header)).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv)).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Failure(format!("writing CSV: {e}")))?;
        out.push_str(&String::from_utf8(bytes).expect("CSV output is UTF-8"));
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let units: Map<String, Value> = self
            .columns
            .iter()
            .map(|c| (c.name.clone(), json!(c.unit)))
            .collect();
        let outputs: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.name.clone(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "tool": "pll",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": inputs,
            "outputs": outputs,
            "units": units,
            "provenance": {
                "model": self.model,
                "notes": self.notes,
            },
        })
    }

    pub fn render(&self, json: bool) -> Result<String, CliError> {
        if json {
            let mut s = serde_json::to_string_pretty(&self.to_json())
                .map_err(|e| CliError::Failure(e.to_string()))?;
            s.push('\n');
            Ok(s)
        } else {
            self.to_csv()
        }
    }
}

/// CSV as written by [`Report::to_csv`]: header names with units stripped,
/// and the raw string rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub comments: Vec<String>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedCsv {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Column `name` parsed as floats.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let idx = self
            .column(name)
            .ok_or_else(|| CliError::Failure(format!("no column `{name}`")))?;
        self.rows
            .iter()
            .map(|r| {
                r[idx]
                    .parse::<f64>()
                    .map_err(|e| CliError::Failure(format!("column `{name}`: {e}")))
            })
            .collect()
    }
}

pub fn read_csv(text: &str) -> Result<ParsedCsv, CliError> {
    let comments = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim().to_string())
        .collect();
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let bad = |e: csv::Error| CliError::Failure(format!("reading CSV: {e}"));
    let columns = r
        .headers()
        .map_err(bad)?
        .iter()
        .map(|h| match h.split_once(" [") {
            Some((name, unit)) => Column::new(name, unit.trim_end_matches(']')),
            None => Column::new(h, ""),
        })
        .collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()).map_err(bad))
        .collect::<Result<_, _>>()?;
    Ok(ParsedCsv {
        comments,
        columns,
        rows,
    })
}
