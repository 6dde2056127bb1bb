//! Validity reports: named pass/fail checks with failure details.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidityReport {
    pub checks: Vec<CheckResult>,
}

impl ValidityReport {
    pub fn new() -> ValidityReport {
        ValidityReport { checks: Vec::new() }
    }

    pub fn pass(&mut self, name: &str) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass: true,
            detail: None,
        });
    }

    pub fn fail(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass: false,
            detail: Some(detail.into()),
        });
    }

    pub fn record(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, detail);
        }
    }

    /// True iff every recorded check passed.
    pub fn valid(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.pass)
    }

    /// One line per check: `check <name>: pass|fail(<detail>)`.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if c.pass {
                out.push_str(&format!("check {}: pass\n", c.name));
            } else {
                out.push_str(&format!(
                    "check {}: fail({})\n",
                    c.name,
                    c.detail.as_deref().unwrap_or("")
                ));
            }
        }
        out
    }
}
