use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

/// One verified statement, tagged with the anchor of the construction it
/// exercises.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &'static str, passed: bool) -> Self {
        Check { name: name.into(), anchor, passed, witness: None }
    }

    pub fn witness(mut self, w: Option<String>) -> Self {
        if !self.passed {
            self.witness = w;
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub input: Option<String>,
    pub options: Map<String, Value>,
    pub checks: Vec<Check>,
    pub results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, input: Option<String>) -> Self {
        Report { command: command.to_string(), seed, input, options: Map::new(), checks: Vec::new(), results: Map::new() }
    }

    pub fn option(&mut self, key: &str, v: impl Serialize) {
        self.options.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "descentlab {}  (seed {})", self.command, self.seed);
        if let Some(i) = &self.input {
            let _ = writeln!(out, "input: {i}");
        }
        for (k, v) in &self.options {
            let _ = writeln!(out, "option {k}: {v}");
        }
        let w_name = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0).max(5);
        let w_anchor = self.checks.iter().map(|c| c.anchor.len()).max().unwrap_or(0).max(6);
        let _ = writeln!(out, "\n{:<w_name$}  {:<w_anchor$}  result", "check", "anchor");
        for c in &self.checks {
            let _ = writeln!(out, "{:<w_name$}  {:<w_anchor$}  {}", c.name, c.anchor, if c.passed { "PASS" } else { "FAIL" });
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "{:<w_name$}  witness: {w}", "");
            }
        }
        if !self.results.is_empty() {
            let _ = writeln!(out, "\nresults:");
            let w_key = self.results.keys().map(String::len).max().unwrap_or(0);
            for (k, v) in &self.results {
                let _ = writeln!(out, "  {k:<w_key$}  {v}");
            }
        }
        let _ = writeln!(out, "\nstatus: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}
