//! Report bundles: residual maps with verdicts, derived constants and
//! provenance. The timestamp is the only field that varies between
//! identical runs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub max_residual: f64,
    pub cases: usize,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl Residual {
    /// A zero case count passes vacuously and is flagged.
    pub fn new(max_residual: f64, cases: usize, tol: f64) -> Self {
        let warning = (cases == 0).then(|| "vacuous".to_string());
        Self { max_residual, cases, tol, pass: cases == 0 || max_residual < tol, warning }
    }

    /// A pass/fail check that is not a residual, recorded as 0 or 1.
    pub fn flag(ok: bool, cases: usize) -> Self {
        Self::new(if ok { 0.0 } else { 1.0 }, cases, 0.5)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema: u32,
    pub tool_version: String,
    pub suite: String,
    pub config: SuiteConfig,
    pub config_hash: String,
    pub verdict: bool,
    pub residuals: BTreeMap<String, Residual>,
    pub derived: serde_json::Value,
    pub timestamp: String,
}

impl ReportBundle {
    pub fn new(config: &SuiteConfig, residuals: BTreeMap<String, Residual>, derived: serde_json::Value) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs().to_string())
            .unwrap_or_default();
        let mut r = Self {
            schema: REPORT_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            suite: config.suite.clone(),
            config: config.clone(),
            config_hash: config.hash(),
            verdict: false,
            residuals,
            derived,
            timestamp,
        };
        r.verdict = r.recompute_verdict();
        r
    }

    /// Pass iff every residual is below its tolerance.
    pub fn recompute_verdict(&self) -> bool {
        self.residuals.values().all(|r| r.cases == 0 || r.max_residual < r.tol)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// The report with the timestamp blanked, for byte comparisons.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.timestamp.clear();
        c.to_json()
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_residuals() {
        let cfg = SuiteConfig::new("identities");
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), Residual::new(1e-12, 5, 1e-10));
        m.insert("b".to_string(), Residual::new(0.0, 0, 1e-10));
        let r = ReportBundle::new(&cfg, m.clone(), serde_json::Value::Null);
        assert!(r.verdict);
        assert_eq!(r.residuals["b"].warning.as_deref(), Some("vacuous"));
        m.insert("c".to_string(), Residual::new(1e-3, 5, 1e-10));
        assert!(!ReportBundle::new(&cfg, m, serde_json::Value::Null).verdict);
    }

    #[test]
    fn reparsed_report_keeps_its_verdict() {
        let cfg = SuiteConfig::new("identities");
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), Residual::new(0.1 + 0.2, 3, 1.0));
        let r = ReportBundle::new(&cfg, m, serde_json::json!({"c": 1.0 / 3.0}));
        let back = ReportBundle::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.recompute_verdict(), r.verdict);
    }
}
