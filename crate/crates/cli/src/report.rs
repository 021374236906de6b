//! Machine-readable command reports.
//!
//! Reports are deterministic functions of (inputs, seed): inputs are echoed,
//! maps are sorted, and no timestamps are recorded. Floats serialize with
//! the shortest round-trip representation.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

/// One asserted check: its measured value against its threshold.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
}

impl Verdict {
    pub fn new(name: &str, pass: bool, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            pass,
            measured,
            threshold,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    inputs: BTreeMap<String, Value>,
    results: BTreeMap<String, Value>,
    verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn verdict(&mut self, verdict: Verdict) {
        self.verdicts.push(verdict);
    }

    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                serde_json::json!({
                    "measured": v.measured,
                    "name": v.name,
                    "pass": v.pass,
                    "threshold": v.threshold,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "verdicts": verdicts,
        });
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

/// Write via a sibling temp file and rename so readers never see a partial
/// report.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp.report");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}
