//! Dirichlet spectral runs on hyperbolic discs.

use std::path::Path;

use llab_hyperbolic::mesh::{build_disc_mesh, DiscMesh, Model};
use llab_hyperbolic::spectral::{dirichlet_eigenvalues, SpectralResult};
use llab_hyperbolic::lanczos::LanczosOptions;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicRow {
    pub radius: f64,
    pub h: f64,
    pub lambda1: f64,
    pub residual: f64,
    pub bound: Option<f64>,
    /// Certified and, where a bound exists, above it.
    pub pass: bool,
}

fn mesh_for(radius: f64, h: f64, cache: Option<&Path>) -> Result<DiscMesh, CliError> {
    let Some(dir) = cache else {
        return Ok(build_disc_mesh(Model::Hyperbolic, radius, h)?);
    };
    let path = dir.join(format!("disc_R{radius}_h{h}.mesh"));
    if let Ok(m) = DiscMesh::read_cache(&path) {
        return Ok(m);
    }
    let m = build_disc_mesh(Model::Hyperbolic, radius, h)?;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.display().to_string(), source })?;
    m.write_cache(&path)?;
    Ok(m)
}

/// Runs every `(R, h)` point; points are independent and run concurrently,
/// results keep the input order.
pub fn run_points(points: &[(f64, f64)], degree: usize, cache: Option<&Path>) -> Result<Vec<(HyperbolicRow, SpectralResult)>, CliError> {
    points
        .par_iter()
        .map(|&(radius, h)| {
            let mesh = mesh_for(radius, h, cache)?;
            mesh.validate()?;
            let res = dirichlet_eigenvalues(&mesh, degree, 1, &LanczosOptions::default())?;
            let certified = res.certified(LanczosOptions::default().certify);
            let pass = certified && res.derived_bound.is_none_or(|b| res.lambda1() >= b);
            let row = HyperbolicRow { radius, h, lambda1: res.lambda1(), residual: res.residuals[0], bound: res.derived_bound, pass };
            Ok((row, res))
        })
        .collect()
}
