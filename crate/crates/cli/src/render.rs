//! One tabular report, three renderings.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(u64),
    Text(String),
    Bool(bool),
    /// Value that does not exist (unattainable threshold, uncovered panel size).
    Missing,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => "-".to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<Option<u64>> for Cell {
    fn from(v: Option<u64>) -> Self {
        v.map_or(Cell::Missing, Cell::Int)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => Ok(self.to_json()),
            OutputFormat::Markdown => Ok(self.to_markdown()),
        }
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::plain))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("plain values serialize");
        s.push('\n');
        s
    }

    fn to_markdown(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.plain().replace('|', "\\|")).collect())
            .collect();
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", self.columns.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(self.columns.len()));
        for row in cells {
            let _ = writeln!(out, "| {} |", row.join(" | "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(&["N", "value", "ok"]);
        r.push(vec![Cell::Int(5), Cell::Text("0.5".into()), Cell::Bool(true)]);
        r.push(vec![Cell::Int(6), Cell::Missing, Cell::Bool(false)]);
        r
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            sample().render(OutputFormat::Csv).unwrap(),
            "N,value,ok\n5,0.5,true\n6,-,false\n"
        );
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().render(OutputFormat::Json).unwrap()).unwrap();
        assert_eq!(v[0]["N"], 5);
        assert_eq!(v[0]["value"], "0.5");
        assert_eq!(v[1]["value"], Value::Null);
    }

    #[test]
    fn markdown_layout() {
        let md = sample().render(OutputFormat::Markdown).unwrap();
        assert_eq!(
            md,
            "| N | value | ok |\n|---|---|---|\n| 5 | 0.5 | true |\n| 6 | - | false |\n"
        );
    }
}
