use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, headers: &[&str]) -> Self {
        Self {
            title: title.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Output of one command: resolved config, verdict, human summary, tables
/// and a structured result for JSON.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub passed: bool,
    pub summary: Vec<String>,
    pub tables: Vec<Table>,
    pub result: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Md => self.markdown(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn markdown(&self) -> String {
        let mut out = format!("# unimod {}\n\n> config: {}\n\n", self.command, self.config);
        for line in &self.summary {
            out += &format!("- {line}\n");
        }
        for t in &self.tables {
            out += &format!("\n## {}\n\n| {} |\n", t.title, t.headers.join(" | "));
            out += &format!("|{}\n", "---|".repeat(t.headers.len()));
            for row in &t.rows {
                out += &format!("| {} |\n", row.join(" | "));
            }
        }
        out += &format!("\n**{}**\n", verdict(self.passed));
        out
    }

    fn csv(&self) -> String {
        let mut out = format!("# config: {}\n", self.config);
        for line in &self.summary {
            out += &format!("# {line}\n");
        }
        for t in &self.tables {
            out += &format!("# table: {}\n", t.title);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.headers).expect("in-memory write");
            for row in &t.rows {
                w.write_record(row).expect("in-memory write");
            }
            out += &String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
        }
        out += &format!("# {}\n", verdict(self.passed));
        out
    }

    fn json(&self) -> String {
        let doc = json!({
            "command": self.command,
            "config": self.config,
            "passed": self.passed,
            "summary": self.summary,
            "result": self.result,
        });
        serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}
