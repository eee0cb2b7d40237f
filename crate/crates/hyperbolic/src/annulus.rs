//! Mass of a 1-form on unit-width geodesic annuli `B_{j+1} \ B_j`.
//!
//! If `(j+1)·mass_j ≥ a > 0` for every `j`, then `Σ mass_j ≥ a Σ 1/(j+1)`
//! diverges, so a square-integrable form must have weighted masses that
//! drop below any fixed threshold along a subsequence.

use serde::{Deserialize, Serialize};

use crate::geometry::{barycentric_gradients, barycentric_point, signed_area, DUNAVANT7};
use crate::mesh::DiscMesh;
use crate::HyperbolicError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusRow {
    pub j: usize,
    pub mass: f64,
    /// `(j+1)·mass`.
    pub weighted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusDecayTable {
    pub rows: Vec<AnnulusRow>,
    pub total_mass: f64,
    /// `‖α‖²` when known independently of the binning.
    pub norm_sqr: Option<f64>,
    pub threshold: f64,
    pub min_weighted: f64,
    /// `min_weighted · Σ_{j ≤ J} 1/(j+1)`, a lower bound for the partial
    /// sum that grows without bound when the weighted column stays up.
    pub divergence_witness: f64,
    /// The weighted column drops below the threshold.
    pub decays: bool,
    /// The weighted column stays above the threshold, forcing divergence.
    pub contradiction: bool,
    /// `jmax` was reduced to fit inside the mesh.
    pub truncated: bool,
}

impl AnnulusDecayTable {
    pub fn from_masses(masses: &[f64], threshold: f64, norm_sqr: Option<f64>) -> Self {
        let rows: Vec<AnnulusRow> =
            masses.iter().enumerate().map(|(j, &m)| AnnulusRow { j, mass: m, weighted: (j + 1) as f64 * m }).collect();
        let min_weighted = rows.iter().map(|r| r.weighted).fold(f64::INFINITY, f64::min);
        let harmonic: f64 = (1..=rows.len()).map(|i| 1.0 / i as f64).sum();
        let decays = min_weighted < threshold;
        Self {
            total_mass: masses.iter().sum(),
            norm_sqr,
            threshold,
            min_weighted,
            divergence_witness: min_weighted * harmonic,
            decays,
            contradiction: !decays,
            truncated: false,
            rows,
        }
    }

    /// `Σ mass_j ≤ ‖α‖² + 1e-8`.
    pub fn mass_consistent(&self) -> bool {
        self.norm_sqr.is_none_or(|n| self.total_mass <= n + 1e-8)
    }
}

/// Bins `∫|α|²_g dvol_g` of a Whitney 1-form (coefficients on all mesh
/// edges) by geodesic distance of the quadrature points. In dimension two
/// this density equals the Euclidean `|α|² dA`.
pub fn annulus_decay(mesh: &DiscMesh, alpha: &[f64], jmax: usize, threshold: f64) -> Result<AnnulusDecayTable, HyperbolicError> {
    let table = mesh.edge_table();
    if alpha.len() != table.edges.len() {
        return Err(HyperbolicError::InvalidParameters(format!("{} edge values for {} edges", alpha.len(), table.edges.len())));
    }
    let last = (mesh.radius().ceil() as usize).saturating_sub(1);
    let truncated = jmax > last;
    if truncated {
        log::warn!("jmax = {jmax} exceeds the mesh radius {}; truncating to {last}", mesh.radius());
    }
    let jmax = jmax.min(last);
    let mut masses = vec![0.0; jmax + 1];
    let mut total = 0.0;
    for (t, te) in table.tri_edges.iter().enumerate() {
        let p = mesh.corners(t);
        let area = signed_area(p);
        let g = barycentric_gradients(p);
        for (b, w) in DUNAVANT7 {
            let mut v = [0.0; 2];
            for (a, &(e, s)) in te.iter().enumerate() {
                let (i, j) = ((a + 1) % 3, (a + 2) % 3);
                let c = s * alpha[e];
                v[0] += c * (b[i] * g[j][0] - b[j] * g[i][0]);
                v[1] += c * (b[i] * g[j][1] - b[j] * g[i][1]);
            }
            let density = w * area * (v[0] * v[0] + v[1] * v[1]);
            total += density;
            let bin = mesh.distance(barycentric_point(p, b)).floor() as usize;
            if bin <= jmax {
                masses[bin] += density;
            }
        }
    }
    let mut out = AnnulusDecayTable::from_masses(&masses, threshold, Some(total));
    out.truncated = truncated;
    Ok(out)
}

/// Edge cochain of `d(Re z^m)`, i.e. differences of vertex values.
pub fn exact_power_form(mesh: &DiscMesh, m: u32) -> Vec<f64> {
    let f: Vec<f64> = mesh.vertices.iter().map(|&[a, b]| nalgebra::Complex::new(a, b).powu(m).re).collect();
    mesh.edge_table().edges.iter().map(|&[a, b]| f[b] - f[a]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_masses_decay() {
        let masses: Vec<f64> = (0..40).map(|j| 0.5f64.powi(j)).collect();
        let t = AnnulusDecayTable::from_masses(&masses, 1e-6, Some(2.0));
        assert!(t.decays && !t.contradiction && t.mass_consistent());
    }

    #[test]
    fn harmonic_masses_trigger_contradiction() {
        let masses: Vec<f64> = (0..1000).map(|j| 1.0 / (j + 1) as f64).collect();
        let t = AnnulusDecayTable::from_masses(&masses, 0.5, None);
        assert!(t.contradiction && (t.min_weighted - 1.0).abs() < 1e-12);
        assert!(t.divergence_witness > 7.0);
    }
}
