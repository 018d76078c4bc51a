//! Flat `key = value` run configuration.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factory::{build_b, build_b_from_values, DiagonalOp, TruncationSpec};
use crate::minimality::QuotientMethod;
use crate::tolerances::Tolerances;

pub const CONFIG_ENV: &str = "ORBIT_GEODESICS_CONFIG";

/// Checks of the `verify` suite, declared in the order of their report names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckName {
    Bch,
    Certify,
    HopfRinow,
    Crossing,
    ColumnMultiple,
    Membership,
    Qnorm,
    ShortCurve,
    Sphere,
    Obstruction,
}

impl CheckName {
    pub const ALL: [CheckName; 10] = [
        CheckName::Bch,
        CheckName::Certify,
        CheckName::HopfRinow,
        CheckName::Crossing,
        CheckName::ColumnMultiple,
        CheckName::Membership,
        CheckName::Qnorm,
        CheckName::ShortCurve,
        CheckName::Sphere,
        CheckName::Obstruction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Bch => "bch",
            CheckName::Certify => "certify",
            CheckName::HopfRinow => "hopf-rinow",
            CheckName::Crossing => "lemma53",
            CheckName::ColumnMultiple => "lemma58",
            CheckName::Membership => "membership",
            CheckName::Qnorm => "qnorm",
            CheckName::ShortCurve => "short-curve",
            CheckName::Sphere => "sphere",
            CheckName::Obstruction => "thm59",
        }
    }
}

impl Serialize for CheckName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crossing" => return Ok(CheckName::Crossing),
            "column-multiple" => return Ok(CheckName::ColumnMultiple),
            "obstruction" => return Ok(CheckName::Obstruction),
            _ => {}
        }
        CheckName::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| {
            let known: Vec<&str> = CheckName::ALL.iter().map(|c| c.as_str()).collect();
            Error::Usage(format!("unknown check {s:?}; known checks: {}", known.join(", ")))
        })
    }
}

/// Parses `a,b,c`, dropping duplicates and sorting by name.
pub fn parse_suite(list: &str) -> Result<Vec<CheckName>> {
    let mut out = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(CheckName::from_str)
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Usage("empty suite".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "rule", content = "values")]
pub enum BaseRule {
    /// `b = diag(1, 1/2, ..., 1/n)`.
    Reciprocal,
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
    pub b_rule: BaseRule,
    pub tolerances: Tolerances,
    pub suite: Vec<CheckName>,
    #[serde(skip)]
    pub output_dir: PathBuf,
    pub seed: u64,
    pub method: QuotientMethod,
    /// Perturbed paths compared against the short curve.
    pub competitors: usize,
    pub bch_trials: usize,
    pub bch_dim: usize,
    pub probe_radius: f64,
    pub probe_norm: f64,
    pub probe_trials: usize,
    pub probe_dim: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 64,
            gamma: 0.5,
            delta: 0.25,
            b_rule: BaseRule::Reciprocal,
            tolerances: Tolerances::default(),
            suite: CheckName::ALL.to_vec(),
            output_dir: PathBuf::from("out"),
            seed: 0,
            method: QuotientMethod::Barrier,
            competitors: 20,
            bch_trials: 100,
            bch_dim: 4,
            probe_radius: std::f64::consts::LN_2 / 8.0,
            probe_norm: 0.05,
            probe_trials: 10,
            probe_dim: 16,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("cannot parse {key} = {value:?}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

impl RunConfig {
    /// Applies one `key = value` setting. Tolerances are addressed as
    /// `tol_<name>`, for example `tol_certificate = 1e-9`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "n" => self.n = parse(key, value)?,
            "gamma" => self.gamma = parse(key, value)?,
            "delta" => self.delta = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "suite" => self.suite = parse_suite(value)?,
            "output_dir" | "out" => self.output_dir = PathBuf::from(value.trim()),
            "method" => self.method = value.trim().parse().map_err(|e: Error| Error::Usage(e.to_string()))?,
            "competitors" => self.competitors = parse(key, value)?,
            "bch_trials" => self.bch_trials = parse(key, value)?,
            "bch_dim" => self.bch_dim = parse(key, value)?,
            "probe_radius" => self.probe_radius = parse(key, value)?,
            "probe_norm" => self.probe_norm = parse(key, value)?,
            "probe_trials" => self.probe_trials = parse(key, value)?,
            "probe_dim" => self.probe_dim = parse(key, value)?,
            "b_rule" => match value.trim() {
                "reciprocal" => self.b_rule = BaseRule::Reciprocal,
                "list" | "user-list" => {
                    if !matches!(self.b_rule, BaseRule::List(_)) {
                        self.b_rule = BaseRule::List(Vec::new());
                    }
                }
                other => return Err(Error::Usage(format!("unknown b_rule {other:?}"))),
            },
            "b_values" => self.b_rule = BaseRule::List(parse_list(key, value)?),
            _ => {
                let Some(name) = key.strip_prefix("tol_") else {
                    return Err(Error::Usage(format!("unknown config key {key:?}")));
                };
                let mut fields = serde_json::to_value(self.tolerances)?;
                let slot = fields
                    .get_mut(name)
                    .ok_or_else(|| Error::Usage(format!("unknown tolerance {name:?}")))?;
                *slot = serde_json::Value::from(parse::<f64>(key, value)?);
                self.tolerances = serde_json::from_value(fields)?;
            }
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let ini = Ini::load_from_str(text).map_err(|e| Error::Usage(format!("config: {e}")))?;
        for (section, props) in &ini {
            if let Some(name) = section {
                return Err(Error::Usage(format!("config sections are not supported: [{name}]")));
            }
            for (k, v) in props.iter() {
                self.set(k, v)?;
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Usage(format!("n must be at least 2, got {}", self.n)));
        }
        for (name, v) in [("gamma", self.gamma), ("delta", self.delta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Usage(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if self.probe_dim < 2 {
            return Err(Error::Usage(format!(
                "probe_dim must be at least 2, got {}",
                self.probe_dim
            )));
        }
        if let BaseRule::List(v) = &self.b_rule {
            if v.len() != self.n {
                return Err(Error::Usage(format!(
                    "b_values has {} entries, n = {}",
                    v.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<TruncationSpec> {
        self.validate()?;
        TruncationSpec::new(self.n, self.gamma, self.delta).map_err(|e| Error::Usage(e.to_string()))
    }

    pub fn base(&self) -> Result<DiagonalOp> {
        match &self.b_rule {
            BaseRule::Reciprocal => build_b(self.n),
            BaseRule::List(v) => build_b_from_values(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_overrides_defaults() {
        let mut c = RunConfig::default();
        c.apply_text(
            "# comment\nn = 12\ngamma=0.4\nsuite = thm59, certify,certify\ntol_certificate = 1e-9\nseed = 5\n",
        )
        .unwrap();
        assert_eq!(c.n, 12);
        assert_eq!(c.gamma, 0.4);
        assert_eq!(c.suite, vec![CheckName::Certify, CheckName::Obstruction]);
        c.set("suite", "obstruction, crossing, lemma53").unwrap();
        assert_eq!(c.suite, vec![CheckName::Crossing, CheckName::Obstruction]);
        assert_eq!(serde_json::to_string(&c.suite).unwrap(), r#"["lemma53","thm59"]"#);
        let mut sorted = CheckName::ALL.map(CheckName::as_str).to_vec();
        sorted.sort();
        assert_eq!(sorted, CheckName::ALL.map(CheckName::as_str).to_vec());
        assert_eq!(c.tolerances.certificate, 1e-9);
        assert_eq!(c.seed, 5);
        c.validate().unwrap();
    }

    #[test]
    fn bad_settings_are_usage_errors() {
        let mut c = RunConfig::default();
        assert!(matches!(c.set("suite", "certify,nope"), Err(Error::Usage(_))));
        assert!(matches!(c.set("colour", "red"), Err(Error::Usage(_))));
        assert!(matches!(c.set("tol_nothing", "1"), Err(Error::Usage(_))));
        assert!(matches!(c.set("n", "many"), Err(Error::Usage(_))));
        assert!(matches!(c.apply_text("[extra]\nn = 3\n"), Err(Error::Usage(_))));
        c.n = 1;
        assert!(matches!(c.validate(), Err(Error::Usage(_))));
        c.n = 3;
        c.set("b_values", "1, 2").unwrap();
        assert!(c.validate().is_err());
        c.set("b_values", "1, 2, 3").unwrap();
        assert_eq!(c.base().unwrap().values(), vec![1.0, 2.0, 3.0]);
    }
}
