use std::fmt::Write as _;
use std::time::Duration;

use ballfix::{Condition, ConditionReport};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

/// One checked condition, named by the operation that evaluated it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub operation: String,
    pub condition: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diff {
    pub key: String,
    pub expected: Value,
    pub actual: Option<Value>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
    Contradiction,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 1,
            Status::Contradiction => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub kind: String,
    pub verdicts: Vec<Verdict>,
    pub outputs: Map<String, Value>,
    pub diffs: Vec<Diff>,
    /// Theorem contradictions: hypotheses held but the conclusion failed.
    pub contradictions: Vec<String>,
    /// Wall time; kept out of the structured output so reports stay
    /// reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn new(scenario: impl Into<String>, kind: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            kind: kind.into(),
            verdicts: Vec::new(),
            outputs: Map::new(),
            diffs: Vec::new(),
            contradictions: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn verdict(
        &mut self,
        operation: &str,
        condition: impl ToString,
        passed: bool,
        witness: Option<String>,
    ) {
        self.verdicts.push(Verdict {
            operation: operation.into(),
            condition: condition.to_string(),
            passed,
            witness,
        });
    }

    pub fn conditions(&mut self, operation: &str, report: &ConditionReport) -> bool {
        for c in &report.checks {
            self.verdict(
                operation,
                c.condition,
                c.passed,
                c.witness.as_ref().map(|w| w.to_string()),
            );
        }
        report.all_passed()
    }

    pub fn condition(&mut self, operation: &str, condition: Condition, passed: bool) {
        self.verdict(operation, condition, passed, None);
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) {
        self.outputs.insert(key.into(), value.into());
    }

    pub fn contradiction(&mut self, message: impl Into<String>) {
        self.contradictions.push(message.into());
    }

    /// Records a diff for every expected key whose actual output differs.
    pub fn compare(&mut self, expected: &Map<String, Value>) {
        for (key, want) in expected {
            let got = self.outputs.get(key);
            if got != Some(want) {
                self.diffs.push(Diff {
                    key: key.clone(),
                    expected: want.clone(),
                    actual: got.cloned(),
                });
            }
        }
    }

    pub fn status(&self) -> Status {
        if !self.contradictions.is_empty() {
            Status::Contradiction
        } else if !self.diffs.is_empty() {
            Status::Mismatch
        } else {
            Status::Ok
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                serde_json::to_string_pretty(self).expect("report serializes") + "\n"
            }
            Format::Human => self.human(),
        }
    }

    fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} [{}]", self.scenario, self.kind);
        for v in &self.verdicts {
            let mark = if v.passed { "pass" } else { "FAIL" };
            let _ = write!(out, "  {mark} {}:{}", v.operation, v.condition);
            if let Some(w) = &v.witness {
                let _ = write!(out, " ({w})");
            }
            out.push('\n');
        }
        for (k, v) in &self.outputs {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "  {k} = {shown}");
        }
        for d in &self.diffs {
            let actual = d
                .actual
                .as_ref()
                .map_or("<missing>".to_string(), Value::to_string);
            let _ = writeln!(
                out,
                "  MISMATCH {}: expected {}, got {actual}",
                d.key, d.expected
            );
        }
        for c in &self.contradictions {
            let _ = writeln!(out, "  CONTRADICTION {c}");
        }
        let status = match self.status() {
            Status::Ok => "ok",
            Status::Mismatch => "expectation mismatch",
            Status::Contradiction => "theorem contradiction",
        };
        let _ = writeln!(
            out,
            "  status: {status} ({:.1} ms)",
            self.elapsed.as_secs_f64() * 1e3
        );
        out
    }
}
