//! Machine-readable verification reports.
//!
//! Integers are written as JSON numbers only while they are exactly
//! representable in an IEEE double (|x| < 2^53); larger values become decimal
//! strings.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const MAX_SAFE_INTEGER: i64 = (1 << 53) - 1;

/// JSON value for an exact integer: a number when safe, a decimal string otherwise.
pub fn json_int(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) if (-MAX_SAFE_INTEGER..=MAX_SAFE_INTEGER).contains(&v) => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn json_uint(x: &BigUint) -> Value {
    json_int(&BigInt::from(x.clone()))
}

pub fn json_ints<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(json_int).collect())
}

/// Parses a value written by [`json_int`].
pub fn parse_json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// A failed claim at a specific location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub location: Map<String, Value>,
    pub value: Value,
    pub expected: String,
}

/// Two independent computations of the same quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub violations: Vec<Violation>,
    pub cross_checks: Vec<CrossCheck>,
    /// Internal failures (oracle mismatch, inexact division).
    pub errors: Vec<String>,
    /// Command-specific results and documentation.
    pub data: Map<String, Value>,
    pub started: Option<String>,
    pub elapsed: Option<f64>,
    pub tool_version: String,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>) -> Self {
        ReportDocument {
            command: command.into(),
            params: Map::new(),
            status: Status::Pass,
            violations: Vec::new(),
            cross_checks: Vec::new(),
            errors: Vec::new(),
            data: Map::new(),
            started: None,
            elapsed: None,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn violation(
        &mut self,
        check: &str,
        location: &[(&str, Value)],
        value: Value,
        expected: &str,
    ) {
        self.violations.push(Violation {
            check: check.to_string(),
            location: location
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            value,
            expected: expected.to_string(),
        });
        self.refresh_status();
    }

    /// Records a cross-check and returns whether the two sides agree.
    pub fn cross_check(&mut self, name: impl Into<String>, expected: Value, actual: Value) -> bool {
        let agree = expected == actual;
        self.cross_checks.push(CrossCheck {
            name: name.into(),
            expected,
            actual,
            agree,
        });
        self.refresh_status();
        agree
    }

    pub fn error(&mut self, msg: impl Into<String>) {
        self.errors.push(msg.into());
        self.refresh_status();
    }

    pub fn set_data(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    /// Error if any internal failure or disagreeing cross-check, else fail if
    /// any violation, else pass.
    pub fn refresh_status(&mut self) {
        self.status = if !self.errors.is_empty() || self.cross_checks.iter().any(|c| !c.agree) {
            Status::Error
        } else if !self.violations.is_empty() {
            Status::Fail
        } else {
            Status::Pass
        };
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// Compact single-object JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}
