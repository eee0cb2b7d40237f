//! `run_suite` dispatch and output writing.

pub mod hyperbolic;
pub mod identities;
pub mod torus;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::config::{Format, SuiteConfig};
use crate::csv::{Cell, HYPERBOLIC, RESIDUALS};
use crate::report::{ReportBundle, Residual};
use crate::{write_file, CliError};

/// Runs the configured suite and writes `report.json` (and CSV) into the
/// output directory when one is set.
pub fn run_suite(cfg: &SuiteConfig) -> Result<ReportBundle, CliError> {
    let (residuals, derived, extra_csv) = match cfg.suite.as_str() {
        "identities" => {
            let mut residuals = BTreeMap::new();
            for &n in &cfg.n {
                for (name, r) in identities::run_identities(n, cfg.cases, cfg.seed)? {
                    residuals.insert(format!("n{n}/{name}"), Residual::new(r.max_residual, r.cases, cfg.tol));
                }
            }
            (residuals, Value::Null, None)
        }
        s if s.starts_with("torus-") => {
            let mut residuals = BTreeMap::new();
            let mut derived = BTreeMap::new();
            for &n in &cfg.n {
                let o = torus::run_torus(n, cfg.cutoff, &s["torus-".len()..], cfg.cases, cfg.seed, cfg.tol)?;
                residuals.extend(o.residuals.into_iter().map(|(k, v)| (format!("n{n}/{k}"), v)));
                derived.insert(format!("n{n}"), json!({ "harmonic": o.harmonic, "suites": o.derived }));
            }
            (residuals, serde_json::to_value(derived)?, None)
        }
        "hyperbolic" => {
            let cache = cfg.out.as_ref().map(|d| d.join("mesh-cache"));
            let runs = hyperbolic::run_points(&cfg.points, cfg.degree, cache.as_deref())?;
            let mut residuals = BTreeMap::new();
            for (row, res) in &runs {
                let key = format!("R{}_h{}", row.radius, row.h);
                let tol = 1e-8 * row.lambda1;
                residuals.insert(format!("{key}/residual"), Residual::new(row.residual, 1, tol));
                if let Some(b) = row.bound {
                    residuals.insert(format!("{key}/gap"), Residual::flag(res.lambda1() >= b, 1));
                }
            }
            let rows: Vec<Vec<Cell>> = runs
                .iter()
                .map(|(r, _)| {
                    vec![
                        Cell::Float(r.radius),
                        Cell::Float(r.h),
                        Cell::Float(r.lambda1),
                        Cell::Float(r.residual),
                        Cell::Float(r.bound.unwrap_or(f64::NAN)),
                        Cell::Bool(r.pass),
                    ]
                })
                .collect();
            let results: Vec<_> = runs.iter().map(|(_, s)| s.clone()).collect();
            let bounds: Vec<Value> = results
                .iter()
                .map(|r| match r.theta_sup.map(|s| llab_hyperbolic::gromov_bound(1, r.degree, s)) {
                    Some(Ok(b)) => serde_json::to_value(b).expect("plain data serializes"),
                    _ => Value::Null,
                })
                .collect();
            (residuals, json!({ "runs": results, "gap_bounds": bounds }), Some(("hyperbolic.csv", HYPERBOLIC.render(&rows), results)))
        }
        other => return Err(CliError::UnknownSuite(other.to_string())),
    };
    let report = ReportBundle::new(cfg, residuals, derived);
    if let Some(dir) = &cfg.out {
        if cfg.wants(Format::Json) {
            write_file(&dir.join("report.json"), report.to_json().as_bytes())?;
        }
        if cfg.wants(Format::Csv) {
            let rows: Vec<Vec<Cell>> = report
                .residuals
                .iter()
                .map(|(name, r)| {
                    vec![
                        Cell::Text(report.suite.clone()),
                        Cell::Text(name.clone()),
                        Cell::Float(r.max_residual),
                        Cell::Int(r.cases),
                        Cell::Float(r.tol),
                        Cell::Bool(r.pass),
                    ]
                })
                .collect();
            write_file(&dir.join("residuals.csv"), RESIDUALS.render(&rows).as_bytes())?;
        }
        if let Some((name, csv, results)) = extra_csv {
            if cfg.wants(Format::Csv) {
                write_file(&dir.join(name), csv.as_bytes())?;
            }
            if cfg.wants(Format::Json) {
                for r in results {
                    let file = format!("spectral_R{}_h{}_k{}.json", r.radius, r.h, r.degree);
                    write_file(&dir.join(file), serde_json::to_string_pretty(&r)?.as_bytes())?;
                }
            }
        }
    }
    Ok(report)
}
