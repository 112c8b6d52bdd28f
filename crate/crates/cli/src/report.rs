//! Machine-readable verification reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// One named invariant and whether it held.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// A claimed isomorphism type for an automorphism group, with the
/// enumeration backing it.
#[derive(Clone, Debug, Serialize)]
pub struct OrderClaim {
    pub object: String,
    pub claimed_group: String,
    pub claimed_order: usize,
    pub verified_order: usize,
    /// Element `i` of the claimed group goes to automorphism `isomorphism[i]`.
    pub isomorphism: Option<Vec<usize>>,
    pub automorphisms: Value,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub input: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<OrderClaim>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(input: Value) -> Self {
        Self { input, ..Self::default() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    /// Records a stage duration when timing is enabled.
    pub fn time(&mut self, stage: &str, seconds: f64) {
        if let Some(t) = &mut self.timings {
            t.insert(stage.to_string(), seconds);
        }
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        out
    }
}
