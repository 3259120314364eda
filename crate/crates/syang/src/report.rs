//! Per-relation verification reports shared by the matrix and ideal checks.

use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Verified,
    Inconclusive,
    Violated,
}

impl Outcome {
    /// 0 success, 1 violation, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::Violated => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportEntry {
    pub label: String,
    pub verdict: String,
    pub outcome: Outcome,
    pub witness: Option<Value>,
    pub support: Vec<String>,
    pub bound: Option<usize>,
    pub elapsed_ms: u128,
    pub detail: Option<Value>,
}

impl ReportEntry {
    pub fn new(label: &str, verdict: &str, outcome: Outcome) -> Self {
        ReportEntry {
            label: label.into(),
            verdict: verdict.into(),
            outcome,
            witness: None,
            support: Vec::new(),
            bound: None,
            elapsed_ms: 0,
            detail: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "relation_label": self.label,
            "verdict": self.verdict,
            "support": self.support,
            "L": self.bound,
            "elapsed_ms": self.elapsed_ms as u64,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        if let Some(d) = &self.detail {
            v["detail"] = d.clone();
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Report { name: name.into(), entries: Vec::new() }
    }

    /// Worst outcome over all entries; an empty report is verified.
    pub fn outcome(&self) -> Outcome {
        self.entries.iter().map(|e| e.outcome).max().unwrap_or(Outcome::Verified)
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.entries.iter().filter(|e| e.outcome == outcome).count()
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    /// Entries without timing, so the output is byte-stable.
    pub fn to_json(&self, with_timing: bool) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = e.to_json();
                if !with_timing {
                    v.as_object_mut().expect("object").remove("elapsed_ms");
                }
                v
            })
            .collect();
        json!({
            "name": self.name,
            "outcome": format!("{:?}", self.outcome()).to_lowercase(),
            "entries": entries,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.name);
        for e in &self.entries {
            s.push_str(&format!("  {:<40} {}\n", e.label, e.verdict));
        }
        s.push_str(&format!(
            "verified {}, inconclusive {}, violated {}\n",
            self.count(Outcome::Verified),
            self.count(Outcome::Inconclusive),
            self.count(Outcome::Violated)
        ));
        s
    }
}
