//! Command reports, printable as text or JSON.
//!
//! Everything except the optional timing table is a function of the input
//! bytes and the flags, so two runs with the same arguments print identical
//! reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One pass/fail line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub input_sha256: String,
    pub max_degree: Option<u32>,
    pub seed: Option<u64>,
    /// Computed facts: `quasi_convex = false`, generator multisets, ...
    pub verdicts: BTreeMap<String, String>,
    /// Coefficient arrays by even degree.
    pub polynomials: BTreeMap<String, Vec<i64>>,
    /// Dimensions indexed by even degree.
    pub graded_dims: BTreeMap<String, Vec<usize>>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u128>>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, input: &str, bytes: &[u8]) -> Self {
        Report { command: command.into(), input: input.into(), input_sha256: sha256_hex(bytes), ..Default::default() }
    }

    pub fn verdict(&mut self, key: impl Into<String>, value: impl ToString) {
        self.verdicts.insert(key.into(), value.to_string());
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records an expected-vs-actual comparison.
    pub fn expect<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: &Option<T>, actual: &T) {
        if let Some(e) = expected {
            let passed = e == actual;
            let detail = if passed { format!("{actual:?}") } else { format!("expected {e:?}, got {actual:?}") };
            self.check(name, passed, detail);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "input: {}", self.input);
        let _ = writeln!(s, "input_sha256: {}", self.input_sha256);
        if let Some(d) = self.max_degree {
            let _ = writeln!(s, "max_degree: {d}");
        }
        if let Some(x) = self.seed {
            let _ = writeln!(s, "seed: {x}");
        }
        for (k, v) in &self.verdicts {
            let _ = writeln!(s, "{k}: {v}");
        }
        for (k, v) in &self.polynomials {
            let _ = writeln!(s, "{k}: {v:?}");
        }
        for (k, v) in &self.graded_dims {
            let _ = writeln!(s, "{k}: {v:?}");
        }
        for c in &self.checks {
            let tag = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(s, "[{tag}] {}", c.name);
            } else {
                let _ = writeln!(s, "[{tag}] {}: {}", c.name, c.detail);
            }
        }
        if let Some(t) = &self.timing_ms {
            for (k, v) in t {
                let _ = writeln!(s, "time {k}: {v} ms");
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let status = if self.all_pass() { "pass" } else { "FAIL" };
        let _ = writeln!(s, "result: {status} ({passed}/{} checks)", self.checks.len());
        s
    }
}

/// Stopwatch that records into a report only when timing was requested.
pub struct Timer {
    enabled: bool,
    start: Instant,
}

impl Timer {
    pub fn start(enabled: bool) -> Self {
        Timer { enabled, start: Instant::now() }
    }

    pub fn stop(self, report: &mut Report, label: &str) {
        if self.enabled {
            let ms = self.start.elapsed().as_millis();
            report.timing_ms.get_or_insert_with(BTreeMap::new).insert(label.to_string(), ms);
        }
    }
}
