//! Command results and their text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultKind {
    Ideal,
    Verdict,
    Integer,
    Polynomial,
    Table,
    Report,
}

/// A scalar in a table or report. Polynomials and rationals are strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Int(i64),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Bool(b) => b.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(i64::try_from(v).expect("value fits in i64"))
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(i64::try_from(v).expect("value fits in i64"))
    }
}

impl From<i128> for Cell {
    fn from(v: i128) -> Self {
        Cell::Int(i64::try_from(v).expect("value fits in i64"))
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandResult {
    pub kind: ResultKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Cell>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilization_index: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, Cell>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Table>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl CommandResult {
    pub fn new(kind: ResultKind) -> Self {
        CommandResult {
            kind,
            command: None,
            line: None,
            generators: Vec::new(),
            verdict: None,
            value: None,
            stabilization_index: None,
            facts: BTreeMap::new(),
            tables: BTreeMap::new(),
            warnings: Vec::new(),
            elapsed: None,
        }
    }

    pub fn verdict(v: bool) -> Self {
        CommandResult {
            verdict: Some(v),
            ..Self::new(ResultKind::Verdict)
        }
    }

    pub fn fact(&mut self, name: &str, value: impl Into<Cell>) -> &mut Self {
        self.facts.insert(name.to_string(), value.into());
        self
    }

    pub fn table(&mut self, name: &str, table: Table) -> &mut Self {
        self.tables.insert(name.to_string(), table);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Renders one result. JSON output is a single object; text output has no
/// header line.
pub fn render(result: &CommandResult, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(result).expect("results serialize"),
        Format::Text => render_text(result),
    }
}

#[derive(Serialize, Deserialize)]
struct Document {
    schema_version: u32,
    results: Vec<CommandResult>,
}

/// The JSON document for a whole session.
pub fn render_json_document(results: &[CommandResult]) -> String {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        results: results.to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("results serialize")
}

/// Parses a document written by [`render_json_document`].
pub fn parse_json_document(text: &str) -> Result<Vec<CommandResult>, serde_json::Error> {
    let doc: Document = serde_json::from_str(text)?;
    Ok(doc.results)
}

fn render_text(r: &CommandResult) -> String {
    let mut out = String::new();
    if r.kind == ResultKind::Ideal {
        if r.generators.is_empty() {
            out.push_str("(0)\n");
        } else {
            for g in &r.generators {
                let _ = writeln!(out, "  {g}");
            }
        }
    }
    if let Some(v) = r.verdict {
        let _ = writeln!(out, "{v}");
    }
    if let Some(v) = &r.value {
        let _ = writeln!(out, "{}", v.text());
    }
    if let Some(s) = r.stabilization_index {
        let _ = writeln!(out, "stabilization index: {s}");
    }
    for (k, v) in &r.facts {
        let _ = writeln!(out, "{k}: {}", v.text());
    }
    for (name, t) in &r.tables {
        let _ = writeln!(out, "[{name}]");
        out.push_str(&render_table(t));
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    if let Some(d) = r.elapsed {
        let _ = writeln!(out, "time: {:.3}s", d.as_secs_f64());
    }
    out
}

/// Columns padded to equal width; integers right-aligned.
pub fn render_table(t: &Table) -> String {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain(std::iter::once(t.columns[i].chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    let header: Vec<String> = t.columns.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
    let _ = writeln!(out, "  {}", header.join("  ").trim_end());
    for (row, raw) in cells.iter().zip(&t.rows) {
        let line: Vec<String> = row
            .iter()
            .zip(raw)
            .zip(&widths)
            .map(|((s, c), w)| match c {
                Cell::Text(_) => format!("{s:<w$}"),
                _ => format!("{s:>w$}"),
            })
            .collect();
        let _ = writeln!(out, "  {}", line.join("  ").trim_end());
    }
    out
}
