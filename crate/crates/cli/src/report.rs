use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

/// Significant digits for floating-point values in every rendering.
pub const SIGNIFICANT_DIGITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub passed: bool,
    /// The fact or procedure the check relies on.
    pub basis: String,
    pub detail: String,
}

impl ReportCheck {
    pub fn new(name: &str, passed: bool, basis: &str, detail: impl Into<String>) -> ReportCheck {
        ReportCheck {
            name: name.into(),
            passed,
            basis: basis.into(),
            detail: detail.into(),
        }
    }
}

/// Output of one subcommand. The text and JSON renderings carry the same
/// fields; floats are rounded to [`SIGNIFICANT_DIGITS`] in both.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<ReportCheck>,
    pub conclusion: String,
}

impl Report {
    pub fn new(command: String, inputs: Value, result: Value) -> Report {
        Report {
            command,
            inputs: round_floats(inputs),
            result: round_floats(result),
            checks: Vec::new(),
            conclusion: String::new(),
        }
    }

    pub fn check(mut self, check: ReportCheck) -> Report {
        self.checks.push(check);
        self
    }

    pub fn conclude(mut self, conclusion: impl Into<String>) -> Report {
        self.conclusion = conclusion.into();
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One line of JSON.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        render_section(&mut out, "inputs", &self.inputs);
        render_section(&mut out, "result", &self.result);
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "  [{mark}] {}: {} ({})", c.name, c.detail, c.basis).unwrap();
            }
        }
        writeln!(out, "conclusion: {}", self.conclusion).unwrap();
        out
    }
}

fn render_section(out: &mut String, title: &str, value: &Value) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            writeln!(out, "{title}:").unwrap();
            render_map(out, map, 1);
        }
        Value::Object(_) | Value::Null => {}
        other => writeln!(out, "{title}: {}", scalar_text(other)).unwrap(),
    }
}

fn render_map(out: &mut String, map: &Map<String, Value>, depth: usize) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        match v {
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                writeln!(out, "{pad}{k}:").unwrap();
                for item in items {
                    match item {
                        Value::String(s) => writeln!(out, "{pad}  - {s}").unwrap(),
                        other => writeln!(out, "{pad}  - {other}").unwrap(),
                    }
                }
            }
            Value::Array(items) if items.iter().all(Value::is_string) && items.len() > 1 => {
                writeln!(out, "{pad}{k}:").unwrap();
                for item in items {
                    writeln!(out, "{pad}  - {}", scalar_text(item)).unwrap();
                }
            }
            Value::Object(inner) if depth < 3 => {
                writeln!(out, "{pad}{k}:").unwrap();
                render_map(out, inner, depth + 1);
            }
            other => writeln!(out, "{pad}{k}: {}", scalar_text(other)).unwrap(),
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Rounds a float to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every non-integer number in a JSON value; integers stay exact.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap());
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(28.955627093_55), 28.95562709);
        assert_eq!(round_sig(26.318945394), 26.31894539);
        assert_eq!(round_floats(json!({"a": [1.23456789012345, 7]})), json!({"a": [1.23456789, 7]}));
        let big = json!(12345678901234567i64);
        assert_eq!(round_floats(big.clone()), big);
    }

    #[test]
    fn text_and_json_agree_on_fields() {
        let r = Report::new("x 1".into(), json!({"a": 1}), json!({"value": 0.5}))
            .check(ReportCheck::new("c", true, "b", "d"))
            .conclude("done");
        let text = r.to_text();
        assert!(text.contains("command: x 1") && text.contains("[PASS] c: d (b)"));
        assert!(text.ends_with("conclusion: done\n"));
        let v: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["conclusion"], "done");
        assert!(!r.to_json_line().contains('\n'));
    }
}
