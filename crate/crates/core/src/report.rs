//! Structured records of named numerical checks.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Outcome of one named check. Maps are ordered so that serialisation is
/// byte-stable for identical inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    /// Short traceability tag naming the statement being exercised.
    pub anchor: String,
    pub params: BTreeMap<String, Value>,
    pub computed: BTreeMap<String, Value>,
    pub reference: BTreeMap<String, Value>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            params: BTreeMap::new(),
            computed: BTreeMap::new(),
            reference: BTreeMap::new(),
            tolerance: 0.0,
            pass: true,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn computed(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.computed.insert(key.to_string(), v.into());
        self
    }

    pub fn reference(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.reference.insert(key.to_string(), v.into());
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn set_computed(&mut self, key: &str, v: impl Into<Value>) {
        self.computed.insert(key.to_string(), v.into());
    }

    /// Non-finite floats cannot be represented in JSON; store them as strings.
    pub fn num(x: f64) -> Value {
        if x.is_finite() {
            Value::from(x)
        } else {
            Value::from(format!("{x}"))
        }
    }
}
