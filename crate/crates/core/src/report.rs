//! Uniform check reports.
//!
//! Every check produces a [`CheckReport`]: a verdict, named residuals that
//! each carry the bound they were tested against, and the parameters of
//! the run. Maps are ordered so serialized reports are byte-stable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A hypothesis of the check did not hold, so nothing was concluded.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// Passes when `value <= tol`.
    AtMost,
    /// Passes when `value >= tol`.
    AtLeast,
    /// Reported only.
    Measured,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub tol: Option<f64>,
    pub bound: Bound,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub residuals: BTreeMap<String, Residual>,
    pub params: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            verdict: Verdict::Pass,
            residuals: BTreeMap::new(),
            params: BTreeMap::new(),
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params.insert(key.into(), to_value(value));
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.details.insert(key.into(), to_value(value));
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    /// Records `value <= tol`; a failure turns a passing verdict into a fail.
    pub fn at_most(&mut self, key: &str, value: f64, tol: f64) -> bool {
        let passed = value <= tol;
        self.insert(key, value, Some(tol), Bound::AtMost, passed)
    }

    /// Records `value >= threshold`.
    pub fn at_least(&mut self, key: &str, value: f64, threshold: f64) -> bool {
        let passed = value >= threshold;
        self.insert(key, value, Some(threshold), Bound::AtLeast, passed)
    }

    pub fn measured(&mut self, key: &str, value: f64) {
        self.insert(key, value, None, Bound::Measured, true);
    }

    fn insert(&mut self, key: &str, value: f64, tol: Option<f64>, bound: Bound, passed: bool) -> bool {
        if !passed && self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
        self.residuals.insert(
            key.into(),
            Residual {
                value,
                tol,
                bound,
                passed,
            },
        );
        passed
    }

    /// Records a boolean condition as a 0/1 residual.
    pub fn require(&mut self, key: &str, ok: bool) -> bool {
        self.insert(key, if ok { 1.0 } else { 0.0 }, Some(1.0), Bound::AtLeast, ok)
    }

    pub fn fail(&mut self, note: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.notes.push(note.into());
    }

    /// Marks the report inconclusive unless it already failed.
    pub fn inconclusive(&mut self, note: impl Into<String>) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Inconclusive;
        }
        self.notes.push(note.into());
    }

    /// Folds `other` into this report under `prefix.`; a failure wins over
    /// an inconclusive result, which wins over a pass.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for (k, r) in other.residuals {
            self.residuals.insert(format!("{prefix}.{k}"), r);
        }
        for (k, v) in other.details {
            self.details.insert(format!("{prefix}.{k}"), v);
        }
        for (k, v) in other.params {
            self.params.insert(format!("{prefix}.{k}"), v);
        }
        self.notes
            .extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
        match other.verdict {
            Verdict::Fail => self.verdict = Verdict::Fail,
            Verdict::Inconclusive if self.verdict == Verdict::Pass => self.verdict = Verdict::Inconclusive,
            _ => {}
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn residual(&self, key: &str) -> Option<f64> {
        self.residuals.get(key).map(|r| r.value)
    }

    pub fn to_json(&self) -> Value {
        to_value(self)
    }
}

fn to_value(v: impl Serialize) -> Value {
    // non-finite floats become null
    serde_json::to_value(v).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_residuals() {
        let mut r = CheckReport::new("demo");
        assert!(r.at_most("a", 1e-9, 1e-8));
        r.measured("b", 3.0);
        assert!(r.passed());
        assert!(!r.at_least("c", 0.5, 1.0));
        assert_eq!(r.verdict, Verdict::Fail);
        r.inconclusive("late");
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn absorb_prefixes_and_merges_verdicts() {
        let mut outer = CheckReport::new("outer");
        let mut inner = CheckReport::new("inner");
        inner.at_most("x", 1.0, 2.0);
        inner.inconclusive("why");
        outer.absorb("a", inner);
        assert_eq!(outer.verdict, Verdict::Inconclusive);
        assert!(outer.residuals.contains_key("a.x"));
        assert_eq!(outer.notes, vec!["a: why".to_string()]);
        let mut bad = CheckReport::new("bad");
        bad.at_least("y", 0.0, 1.0);
        outer.absorb("b", bad);
        assert_eq!(outer.verdict, Verdict::Fail);
    }

    #[test]
    fn serialization_is_ordered_and_carries_tolerances() {
        let mut r = CheckReport::new("demo");
        r.param("z", 1).param("a", 2);
        r.at_most("res", 0.5, 1.0);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
        assert!(s.contains("\"tol\":1.0"));
        let back: CheckReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
