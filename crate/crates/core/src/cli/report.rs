use std::fmt::Write as _;

use serde::Serialize;

/// One line of a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub kind: String,
    pub indices: Vec<usize>,
    pub text: String,
    pub latex: String,
    pub pass: bool,
}

/// Ordered entries produced by one command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub entries: Vec<Entry>,
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    kind: &'a str,
    indices: &'a [usize],
    expr: &'a str,
    pass: bool,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: u32,
    command: &'a str,
    entries: Vec<JsonEntry<'a>>,
}

pub const SCHEMA_VERSION: u32 = 1;

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: &str, indices: &[usize], text: impl Into<String>, latex: impl Into<String>, pass: bool) {
        self.entries.push(Entry {
            kind: kind.to_string(),
            indices: indices.to_vec(),
            text: text.into(),
            latex: latex.into(),
            pass,
        });
    }

    /// An informational entry (always passes).
    pub fn info(&mut self, kind: &str, indices: &[usize], text: impl Into<String>, latex: impl Into<String>) {
        self.push(kind, indices, text, latex, true);
    }

    pub fn check(&mut self, kind: &str, indices: &[usize], text: impl Into<String>, pass: bool) {
        let t = text.into();
        self.push(kind, indices, t.clone(), t, pass);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| !e.pass).count()
    }

    pub fn find(&self, kind: &str, indices: &[usize]) -> Option<&Entry> {
        self.entries.iter().find(|e| e.kind == kind && e.indices == indices)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "{} {}{}: {}", if e.pass { "ok  " } else { "FAIL" }, e.kind, idx(&e.indices), e.text);
        }
        let _ = writeln!(s, "{}: {} entries, {} failed", self.command, self.entries.len(), self.failures());
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::from("\\begin{itemize}\n");
        for e in &self.entries {
            let mark = if e.pass { "" } else { " \\textbf{(fail)}" };
            let _ = writeln!(s, "  \\item \\texttt{{{}{}}}{}: ${}$", e.kind, idx(&e.indices), mark, e.latex);
        }
        s.push_str("\\end{itemize}\n");
        s
    }

    pub fn to_json(&self) -> String {
        let r = JsonReport {
            version: SCHEMA_VERSION,
            command: &self.command,
            entries: self
                .entries
                .iter()
                .map(|e| JsonEntry {
                    kind: &e.kind,
                    indices: &e.indices,
                    expr: &e.text,
                    pass: e.pass,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&r).expect("serializable") + "\n"
    }
}

fn idx(ix: &[usize]) -> String {
    if ix.is_empty() {
        return String::new();
    }
    let v: Vec<String> = ix.iter().map(|i| i.to_string()).collect();
    format!("[{}]", v.join(","))
}
