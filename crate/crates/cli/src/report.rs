use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use shifted_poisson::dcrit::CheckResult;

/// Machine-readable verification report. Serialisation is byte-deterministic
/// for fixed inputs and seed; timings are zeroed unless explicitly enabled.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: String,
    pub residual: Option<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            seed,
            elapsed_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(Check {
            name: c.name,
            status: if c.pass {
                "pass".to_string()
            } else {
                "fail".to_string()
            },
            residual: c.residual,
        });
    }

    pub fn extend(&mut self, cs: Vec<CheckResult>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn push_error(&mut self, name: &str, err: impl ToString) {
        self.checks.push(Check {
            name: name.to_string(),
            status: "fail".to_string(),
            residual: Some(err.to_string()),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == "pass")
    }

    pub fn finalize(&mut self, started: Instant, timings: bool) {
        self.elapsed_ms = if timings {
            started.elapsed().as_millis() as u64
        } else {
            0
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
