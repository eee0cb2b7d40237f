//! Suite configuration. Every random draw is derived from `seed`, so two
//! runs with equal configs produce identical reports.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// `identities`, `torus-<name>` or `hyperbolic`.
    pub suite: String,
    pub n: Vec<usize>,
    pub cases: usize,
    pub seed: u64,
    pub tol: f64,
    /// Fourier cutoff for torus suites.
    pub cutoff: usize,
    /// Form degree for hyperbolic runs.
    pub degree: usize,
    /// `(R, h)` pairs for hyperbolic runs, in sweep order.
    pub points: Vec<(f64, f64)>,
    pub out: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            n: vec![2],
            cases: 100,
            seed: 7,
            tol: 1e-10,
            cutoff: 1,
            degree: 0,
            points: Vec::new(),
            out: None,
            formats: vec![Format::Json, Format::Csv],
        }
    }

    /// SHA-256 of the canonical JSON, ignoring the output location.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        let bytes = serde_json::to_vec(&c).expect("plain data serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// Parses `R=2,4,6:h=0.2,0.1` into the Cartesian product in reading order.
pub fn parse_sweep(sweep: &str) -> Option<Vec<(f64, f64)>> {
    let mut radii = None;
    let mut sizes = None;
    for part in sweep.split(':') {
        let (key, values) = part.split_once('=')?;
        let values: Vec<f64> = values.split(',').map(|v| v.trim().parse().ok()).collect::<Option<_>>()?;
        match key.trim() {
            "R" => radii = Some(values),
            "h" => sizes = Some(values),
            _ => return None,
        }
    }
    let (radii, sizes) = (radii?, sizes?);
    Some(radii.iter().flat_map(|&r| sizes.iter().map(move |&h| (r, h))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grammar() {
        assert_eq!(parse_sweep("R=2,4:h=0.2,0.1").unwrap(), vec![(2.0, 0.2), (2.0, 0.1), (4.0, 0.2), (4.0, 0.1)]);
        assert!(parse_sweep("R=2").is_none());
        assert!(parse_sweep("R=2:x=1").is_none());
        assert!(parse_sweep("R=a:h=1").is_none());
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = SuiteConfig::new("identities");
        let mut b = a.clone();
        b.out = Some("/tmp/x".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = 8;
        assert_ne!(a.hash(), b.hash());
    }
}
