//! Replayable move traces.
//!
//! A trace is a sequence of steps, each carrying the move that was applied,
//! the designated measure before and after, and the named runtime checks the
//! move verified. Traces serialize as JSON lines, one step per line, so a
//! verifier can re-run every check against the recorded values.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: Value,
    pub measure_before: Vec<i64>,
    pub measure_after: Vec<i64>,
    pub checks: Vec<NamedCheck>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl Trace {
    pub fn new() -> Trace {
        Trace::default()
    }

    pub fn push(
        &mut self,
        mv: Value,
        measure_before: Vec<i64>,
        measure_after: Vec<i64>,
        checks: Vec<NamedCheck>,
    ) {
        let step = self.steps.len();
        self.steps.push(TraceStep {
            step,
            mv,
            measure_before,
            measure_after,
            checks,
        });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn all_checks_pass(&self) -> bool {
        self.steps.iter().all(|s| s.checks.iter().all(|c| c.pass))
    }

    /// One JSON object per line; the verdict, when present, is a final line
    /// `{"verdict": ...}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("trace step serializes"));
            out.push('\n');
        }
        if let Some(v) = &self.verdict {
            out.push_str(&format!("{{\"verdict\":{}}}\n", serde_json::to_string(v).unwrap()));
        }
        out
    }

    pub fn from_json_lines(text: &str) -> Result<Trace, serde_json::Error> {
        let mut trace = Trace::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let value: Value = serde_json::from_str(line)?;
            if let Some(v) = value.get("verdict") {
                trace.verdict = Some(v.as_str().unwrap_or_default().to_string());
            } else {
                trace.steps.push(serde_json::from_value(value)?);
            }
        }
        Ok(trace)
    }
}

pub fn check(name: &str, pass: bool) -> NamedCheck {
    NamedCheck {
        name: name.to_string(),
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_lines_round_trip() {
        let mut t = Trace::new();
        t.push(
            json!({"op": "slide", "moving": 1, "over": 0}),
            vec![5],
            vec![4],
            vec![check("crossings_decreased", true)],
        );
        t.verdict = Some("genus-zero reached".to_string());
        let text = t.to_json_lines();
        let back = Trace::from_json_lines(&text).unwrap();
        assert_eq!(t, back);
    }
}
