//! Dispatch of the flat-torus suites.

use std::collections::BTreeMap;

use llab_core::bigraded::type_range;
use llab_core::Triple;
use llab_torus::{
    anti_invariant_suite, harmonic_space, self_dual_invariant_relation, verify_kahler_identity, verify_lemma_l10,
    verify_lemma_l8, verify_p7_decomposition, FourierComplex, HarmonicSpaceReport, TorusError,
};
use serde_json::{json, Value};

use crate::report::Residual;
use crate::CliError;

pub const SUITES: [&str; 6] = ["antiinv", "kahler", "l10", "l8", "p7", "selfdual"];

#[derive(Debug)]
pub struct TorusOutcome {
    pub harmonic: Vec<HarmonicSpaceReport>,
    pub residuals: BTreeMap<String, Residual>,
    pub derived: BTreeMap<String, Value>,
}

fn max(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

/// Runs one named suite, or all of them for `all`. Suites that need
/// `n >= 2` are recorded as vacuous at `n = 1`.
pub fn run_torus(n: usize, cutoff: usize, suite: &str, samples: usize, seed: u64, tol: f64) -> Result<TorusOutcome, CliError> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(CliError::UnknownSuite(format!("torus-{s}"))),
    };
    let fc = FourierComplex::new(n, cutoff, Triple::standard(n)?)?;
    let harmonic = (0..=2 * n).map(|k| harmonic_space(&fc, k)).collect::<Result<Vec<_>, _>>()?;
    let mut residuals = BTreeMap::new();
    let mut derived = BTreeMap::new();
    let mut put = |name: &str, r: Residual| {
        residuals.insert(name.to_string(), r);
    };
    for name in names {
        match name {
            "p7" => {
                let mut reports = Vec::new();
                for k in 0..=2 * n {
                    for p in type_range(n, k) {
                        reports.push(verify_p7_decomposition(&fc, p, k - p)?);
                    }
                }
                put("p7_span", Residual::new(max(reports.iter().map(|r| r.span_residual)), reports.len(), tol));
                put("p7_containment", Residual::new(max(reports.iter().map(|r| r.containment_residual)), reports.len(), tol));
                derived.insert("p7".into(), serde_json::to_value(&reports)?);
            }
            "l8" => {
                let r = verify_lemma_l8(&fc, samples, seed);
                put("l8", Residual::new(r.max_residual, r.samples, tol));
                derived.insert("l8".into(), serde_json::to_value(&r)?);
            }
            "l10" => {
                let r = verify_lemma_l10(&fc, samples, seed);
                put("l10_cross", Residual::new(r.max_cross, r.samples, tol));
                put("l10_primitive_ratio", Residual::new(r.primitive_ratio_deviation, r.samples, tol));
                derived.insert("l10".into(), serde_json::to_value(&r)?);
            }
            "kahler" => {
                let r = verify_kahler_identity(&fc, samples, seed);
                put("kahler_identity", Residual::new(r.max_residual, r.samples, tol));
                put("kahler_split", Residual::new(r.max_split_residual, r.samples, tol));
                derived.insert("kahler".into(), serde_json::to_value(&r)?);
            }
            "antiinv" | "selfdual" if n < 2 => {
                put(name, Residual::new(0.0, 0, tol));
            }
            "antiinv" => {
                let r = anti_invariant_suite(&fc)?;
                put("antiinv_fit", Residual::new(r.fit_residual, 1, tol));
                put("antiinv_unique_match", Residual::flag(r.distinct_matches == 1, 1));
                put("antiinv_closed_harmonic", Residual::new(r.closed_laplacian_residual, r.closed_anti_invariant_dim, tol));
                derived.insert("antiinv".into(), serde_json::to_value(&r)?);
            }
            "selfdual" => {
                let r = match self_dual_invariant_relation(&fc, samples, seed) {
                    Err(TorusError::NoNonzeroModes) => {
                        put(name, Residual::new(0.0, 0, tol));
                        continue;
                    }
                    other => other?,
                };
                put("selfdual_closed", Residual::new(r.closed_residual, samples, tol));
                put("selfdual_energy_relation", Residual::new(r.df_relation_residual, samples, tol));
                put("selfdual_dlambda", Residual::new(r.dlambda_residual, samples, tol));
                derived.insert("selfdual".into(), serde_json::to_value(&r)?);
            }
            _ => unreachable!("filtered above"),
        }
    }
    derived.insert(
        "harmonic_dims".into(),
        json!(harmonic.iter().map(|h| (h.k, h.total_dim)).collect::<Vec<_>>()),
    );
    Ok(TorusOutcome { harmonic, residuals, derived })
}
