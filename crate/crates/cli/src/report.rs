use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use powerops::homalg::{Degree, ModulePresentation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Markdown,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }
}

/// The output of one command. `pass` is false iff some executed check failed.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub pass: bool,
    pub failures: Vec<String>,
    pub tables: Vec<Table>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Self {
        Report {
            command: command.into(),
            params,
            seed: None,
            pass: true,
            failures: Vec::new(),
            tables: Vec::new(),
            data: Value::Null,
        }
    }

    /// Records a check; a false `ok` fails the report.
    pub fn check(&mut self, ok: bool, what: impl Into<String>) -> bool {
        if !ok {
            self.pass = false;
            self.failures.push(what.into());
        }
        ok
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Markdown => Ok(self.markdown()),
            Format::Csv => self.csv(),
        }
    }

    fn markdown(&self) -> String {
        let mut s = format!("# {}\n\n", self.command);
        if let Value::Object(p) = &self.params {
            for (k, v) in p {
                if !v.is_null() {
                    let _ = writeln!(s, "- {k}: {v}");
                }
            }
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "- seed: {seed}");
        }
        let _ = writeln!(s, "- result: {}\n", if self.pass { "PASS" } else { "FAIL" });
        for f in &self.failures {
            let _ = writeln!(s, "- failed: {f}");
        }
        if !self.failures.is_empty() {
            s.push('\n');
        }
        for t in &self.tables {
            let _ = writeln!(s, "## {}\n", t.title);
            let head: Vec<String> = t.columns.iter().map(|c| c.replace('|', "\\|")).collect();
            let _ = writeln!(s, "| {} |", head.join(" | "));
            let _ = writeln!(s, "|{}", "---|".repeat(t.columns.len()));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                let _ = writeln!(s, "| {} |", cells.join(" | "));
            }
            s.push('\n');
        }
        s
    }

    /// Every table as a header record followed by its rows, each prefixed
    /// with the table title.
    fn csv(&self) -> anyhow::Result<String> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(["command", &self.command, "pass", &self.pass.to_string()])?;
        if let Some(seed) = self.seed {
            w.write_record(["seed", &seed.to_string()])?;
        }
        for t in &self.tables {
            let mut head = vec!["table".to_string()];
            head.extend(t.columns.iter().cloned());
            w.write_record(&head)?;
            for r in &t.rows {
                let mut rec = vec![t.title.clone()];
                rec.extend(r.iter().cloned());
                w.write_record(&rec)?;
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

pub fn homology_string(h: &BTreeMap<Degree, ModulePresentation>) -> String {
    let parts: Vec<String> = h
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(q, x)| format!("H{q} = {x}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(", ")
    }
}
