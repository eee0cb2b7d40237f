//! Radial cutoffs `f_ε = (1 − ε·max(0, ρ − r)/2)²` supported in `ρ ≤ r + 2/ε`.
//!
//! On the taper `|f'| = ε(1 − εs/2) ≤ ε` and `|f'|²/f = ε²`, so both bounds
//! hold for `ε ≤ 1`. Fitting the taper inside radius `R` needs
//! `r = R − 2/ε ≥ 0`, i.e. `ε ≥ 2/R`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{barycentric_gradients, barycentric_point, conformal_factor, signed_area, DUNAVANT7};
use crate::mesh::{DiscMesh, Model};
use crate::HyperbolicError;

const SAMPLES: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffProfile {
    pub eps: f64,
    pub radius: f64,
    /// `f = 1` on `ρ ≤ plateau`.
    pub plateau: f64,
    /// `f = 0` on `ρ ≥ support`.
    pub support: f64,
    /// Sampled `sup |f'|`.
    pub sup_df: f64,
    /// Sampled `sup |f'|²/f` over `f > 0`.
    pub sup_df2_over_f: f64,
    pub samples: usize,
}

impl CutoffProfile {
    pub fn value(&self, rho: f64) -> f64 {
        let s = (rho - self.plateau).max(0.0);
        (1.0 - self.eps * s / 2.0).max(0.0).powi(2)
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        let s = rho - self.plateau;
        if s <= 0.0 || rho >= self.support {
            0.0
        } else {
            -self.eps * (1.0 - self.eps * s / 2.0)
        }
    }

    pub fn bounds_hold(&self) -> bool {
        let slack = 1e-6 * self.eps;
        self.sup_df <= self.eps + slack && self.sup_df2_over_f <= self.eps + slack
    }

    /// Fraction of the radius where `f = 1`.
    pub fn plateau_fraction(&self) -> f64 {
        self.plateau / self.radius
    }
}

/// Cutoff on a ball of radius `radius`; rejects `ε` outside `[2/R, 1]`.
pub fn cutoff_profile(radius: f64, eps: f64) -> Result<CutoffProfile, HyperbolicError> {
    if !(eps > 0.0 && radius > 0.0) {
        return Err(HyperbolicError::InvalidParameters(format!("eps = {eps}, R = {radius}")));
    }
    let width = 2.0 / eps;
    if width > radius || eps > 1.0 {
        return Err(HyperbolicError::InfeasibleCutoff { eps, width, radius });
    }
    let mut p = CutoffProfile { eps, radius, plateau: radius - width, support: radius, sup_df: 0.0, sup_df2_over_f: 0.0, samples: SAMPLES };
    // Central differences on a dense grid check the closed-form bounds.
    // The profile is piecewise quadratic, so the differences are exact away
    // from the two kinks and average the one-sided slopes at them.
    let step = radius / SAMPLES as f64;
    let dh = 0.25 * step;
    for i in 0..SAMPLES {
        let rho = (i as f64 + 0.5) * step;
        let df = (p.value(rho + dh) - p.value(rho - dh)) / (2.0 * dh);
        let f = p.value(rho);
        p.sup_df = p.sup_df.max(df.abs());
        if f > 1e-8 {
            p.sup_df2_over_f = p.sup_df2_over_f.max(df * df / f);
        }
    }
    Ok(p)
}

pub fn cutoff_family(mesh: &DiscMesh, eps: f64) -> Result<CutoffProfile, HyperbolicError> {
    cutoff_profile(mesh.radius(), eps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossTermEstimate {
    /// `|⟨dα, 2f df∧α⟩|`.
    pub cross: f64,
    pub f_alpha: f64,
    pub f_dalpha: f64,
    /// `cross / (ε ‖fα‖ ‖f dα‖)`.
    pub constant: f64,
}

/// Quadrature of the cross term for a random Whitney 1-form on interior
/// edges of a hyperbolic mesh.
pub fn cross_term_estimate(mesh: &DiscMesh, profile: &CutoffProfile, seed: u64) -> Result<CrossTermEstimate, HyperbolicError> {
    if mesh.model != Model::Hyperbolic {
        return Err(HyperbolicError::InvalidParameters("cross-term estimate needs the hyperbolic model".into()));
    }
    let table = mesh.edge_table();
    let mut rng = llab_core::random::case_rng(seed, "cutoff-cross-term", table.edges.len() as u64);
    let alpha: Vec<f64> =
        table.boundary.iter().map(|&b| if b { 0.0 } else { rng.random_range(-1.0..1.0) }).collect();
    let (mut cross, mut fa, mut fd) = (0.0, 0.0, 0.0);
    for (t, te) in table.tri_edges.iter().enumerate() {
        let p = mesh.corners(t);
        let area = signed_area(p);
        let g = barycentric_gradients(p);
        let curl: f64 = te.iter().map(|&(e, s)| s * alpha[e]).sum::<f64>() / area;
        for (b, w) in DUNAVANT7 {
            let z = barycentric_point(p, b);
            let lam = conformal_factor(z);
            let rho = mesh.distance(z);
            let f = profile.value(rho);
            let r = z[0].hypot(z[1]);
            // ∇ρ = λ z/|z| in disc coordinates.
            let df = if r > 0.0 { profile.derivative(rho) * lam / r } else { 0.0 };
            let df = [df * z[0], df * z[1]];
            let mut v = [0.0; 2];
            for (a, &(e, s)) in te.iter().enumerate() {
                let (i, j) = ((a + 1) % 3, (a + 2) % 3);
                let c = s * alpha[e];
                v[0] += c * (b[i] * g[j][0] - b[j] * g[i][0]);
                v[1] += c * (b[i] * g[j][1] - b[j] * g[i][1]);
            }
            let wedge = df[0] * v[1] - df[1] * v[0];
            // 2-form pairing carries λ⁻²; 1-form pairing is conformal.
            let wa = w * area;
            cross += wa * curl * 2.0 * f * wedge / (lam * lam);
            fa += wa * f * f * (v[0] * v[0] + v[1] * v[1]);
            fd += wa * f * f * curl * curl / (lam * lam);
        }
    }
    let (f_alpha, f_dalpha) = (fa.sqrt(), fd.sqrt());
    Ok(CrossTermEstimate { cross: cross.abs(), f_alpha, f_dalpha, constant: cross.abs() / (profile.eps * f_alpha * f_dalpha) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_profile_meets_both_bounds() {
        let p = cutoff_profile(8.0, 0.5).unwrap();
        assert!(p.bounds_hold(), "{p:?}");
        assert_eq!(p.plateau, 4.0);
        assert_eq!(p.value(3.9), 1.0);
        assert_eq!(p.value(8.0), 0.0);
    }

    #[test]
    fn small_eps_does_not_fit() {
        match cutoff_profile(8.0, 0.1) {
            Err(HyperbolicError::InfeasibleCutoff { width, .. }) => assert_eq!(width, 20.0),
            other => panic!("{other:?}"),
        }
    }
}
