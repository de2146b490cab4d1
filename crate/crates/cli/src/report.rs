//! The report envelope shared by all commands.

use cuspcenter_core::{Error, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::json::ParamsJson;

pub const REPORT_SCHEMA: &str = "cuspcenter-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    InvalidInput,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::InvalidInput => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Offending class, orbit or point when the check failed.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Request {
    pub q: u64,
    pub ell: Option<u64>,
    pub n: Option<u64>,
    pub d: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub command: String,
    pub request: Request,
    pub parameter_set: Option<ParamsJson>,
    pub reduced: Option<ParamsJson>,
    pub status: Status,
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub artifacts: Map<String, Value>,
}

/// Envelope plus human-readable summary lines for `--out text`.
#[derive(Debug, Clone)]
pub struct Report {
    pub envelope: ReportEnvelope,
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(command: &str, request: Request) -> Self {
        Report {
            envelope: ReportEnvelope {
                schema: REPORT_SCHEMA,
                tool_version: TOOL_VERSION,
                command: command.to_string(),
                request,
                parameter_set: None,
                reduced: None,
                status: Status::Pass,
                error: None,
                checks: Vec::new(),
                artifacts: Map::new(),
            },
            summary: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.envelope.status.exit_code()
    }

    pub fn artifact<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).expect("artifacts serialize");
        self.envelope.artifacts.insert(key.to_string(), v);
    }

    pub fn pass(&mut self, name: &str) {
        self.envelope.checks.push(Check { name: name.to_string(), status: Status::Pass, witness: None });
    }

    pub fn fail(&mut self, name: &str, witness: String) {
        self.envelope.checks.push(Check { name: name.to_string(), status: Status::Fail, witness: Some(witness) });
        self.envelope.status = Status::Fail;
    }

    /// Records a check from a result, passing the result through.
    pub fn check<T>(&mut self, name: &str, r: Result<T>) -> Result<T> {
        match &r {
            Ok(_) => self.pass(name),
            Err(e) if !e.is_input_error() => self.fail(name, e.to_string()),
            Err(_) => {}
        }
        r
    }

    /// Records a boolean check.
    pub fn expect(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness());
        }
    }

    /// Folds a command's terminal error into the status.
    pub fn finish(&mut self, r: Result<()>) {
        if let Err(e) = r {
            self.envelope.error = Some(e.to_string());
            if e.is_input_error() {
                self.envelope.status = Status::InvalidInput;
            } else {
                if !self.envelope.checks.iter().any(|c| c.status == Status::Fail) {
                    self.fail(&failing_check_name(&e), e.to_string());
                }
                self.envelope.status = Status::Fail;
            }
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.envelope).expect("envelope serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let e = &self.envelope;
        let r = &e.request;
        let opt = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        let mut lines = vec![format!(
            "cuspcenter {} q={} ell={} n={} d={}",
            e.command,
            r.q,
            opt(r.ell),
            opt(r.n),
            r.d
        )];
        let status = match e.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::InvalidInput => "invalid input",
        };
        lines.push(format!("status: {status}"));
        if let Some(err) = &e.error {
            lines.push(format!("error: {err}"));
        }
        for c in &e.checks {
            match &c.witness {
                None => lines.push(format!("  [pass] {}", c.name)),
                Some(w) => lines.push(format!("  [FAIL] {}: {w}", c.name)),
            }
        }
        lines.extend(self.summary.iter().cloned());
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

fn failing_check_name(e: &Error) -> String {
    match e {
        Error::AssertionFailure { check, .. } => check.clone(),
        Error::IntegralityFailure(_) => "integrality".into(),
        Error::NoSolution(_) => "solvability".into(),
        Error::RelationFailure(_) => "relation".into(),
        Error::DegreeMismatch { .. } => "degree".into(),
        _ => "error".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> Report {
        Report::new("invariants", Request { q: 2, ell: Some(3), n: None, d: 1 })
    }

    #[test]
    fn input_errors_exit_2_without_checks() {
        let mut r = report();
        let res: Result<()> = r.check("orbit-order", Err(Error::ScaleLimit("big".into())));
        r.finish(res);
        assert_eq!(r.exit_code(), 2);
        assert!(r.envelope.checks.is_empty());
    }

    #[test]
    fn failures_carry_a_named_check() {
        let mut r = report();
        r.pass("degree");
        r.finish(Err(Error::NoSolution("class x".into())));
        assert_eq!(r.exit_code(), 1);
        let last = r.envelope.checks.last().unwrap();
        assert_eq!(last.name, "solvability");
        assert!(last.witness.as_deref().unwrap().contains("class x"));
    }

    #[test]
    fn json_ends_with_newline_and_has_no_floats() {
        let mut r = report();
        r.artifact("x", &crate::json::RationalJson { num: "1".into(), den: "3".into() });
        let s = r.to_json();
        assert!(s.ends_with("}\n"));
        assert!(s.contains("\"num\": \"1\""));
    }
}
