//! The versioned JSON report every subcommand emits.
//!
//! Output is canonical: object keys sorted, every float rounded to 12
//! significant digits, so equal inputs give byte-identical files.

use serde::Serialize;
use serde_json::{Map, Number, Value};

pub const SCHEMA: &str = "locc-lab/1";
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Distance to failing; negative when the check failed.
    pub margin: f64,
    pub tolerance: f64,
}

impl Check {
    /// `error ≤ tolerance`
    pub fn within(name: impl Into<String>, error: f64, tolerance: f64) -> Self {
        let margin = tolerance - error;
        Self { name: name.into(), passed: error <= tolerance, margin, tolerance }
    }

    /// `slack ≥ −tolerance`, for inequalities reported by their slack.
    pub fn slack(name: impl Into<String>, slack: f64, tolerance: f64) -> Self {
        Self { name: name.into(), passed: slack >= -tolerance, margin: slack + tolerance, tolerance }
    }

    /// A yes/no condition; margin is 0 on success and −1 on failure.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), passed: ok, margin: if ok { 0.0 } else { -1.0 }, tolerance: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Report {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            seed,
            inputs: Map::new(),
            results: Map::new(),
            checks: Vec::new(),
        }
    }

    pub fn input<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        self.inputs.insert(key.to_string(), to_value(&value));
        self
    }

    pub fn result<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        self.results.insert(key.to_string(), to_value(&value));
        self
    }

    pub fn check(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema".into(), Value::String(SCHEMA.into()));
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("seed".into(), self.seed.map_or(Value::Null, |s| Value::Number(s.into())));
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        root.insert("results".into(), Value::Object(self.results.clone()));
        root.insert("checks".into(), to_value(&self.checks));
        let mut v = Value::Object(root);
        round_floats(&mut v);
        v
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }
}

/// Rounds to 12 significant digits. Non-finite values pass through (serde
/// writes them as null).
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let r: f64 = s.parse().expect("formatted float parses");
    if r == 0.0 { 0.0 } else { r }
}

/// Float formatted the way it appears in reports.
pub fn format_float(x: f64) -> String {
    match Number::from_f64(round_sig(x)) {
        Some(n) => n.to_string(),
        None => "nan".to_string(),
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}
