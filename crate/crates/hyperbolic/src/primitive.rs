//! A bounded primitive of the hyperbolic area form.
//!
//! In the upper half-plane `w = x + iy` the form `θ = dx/y` satisfies
//! `dθ = dx∧dy/y²` and `|θ|_g = 1`. It is pulled back to the disc through the
//! Cayley map, which is holomorphic and hence orientation preserving.

use serde::{Deserialize, Serialize};

use crate::geometry::{barycentric_point, cayley, conformal_factor, signed_area, Point, DUNAVANT7, GAUSS5};
use crate::mesh::{DiscMesh, Model};
use crate::HyperbolicError;

/// Euclidean components `(θ_a, θ_b)` of `θ` at `z = a + ib`.
pub fn theta(z: Point) -> [f64; 2] {
    let (w, dw) = cayley(z);
    // dx = Re(w' dz) = Re(w') da − Im(w') db.
    [dw.re / w.im, -dw.im / w.im]
}

/// `|θ|_g = |θ|_euc / λ`.
pub fn theta_norm(z: Point) -> f64 {
    let t = theta(z);
    t[0].hypot(t[1]) / conformal_factor(z)
}

/// `∫_a^b θ` along the straight segment.
pub fn theta_line_integral(a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    GAUSS5
        .iter()
        .map(|&(s, w)| {
            let t = theta([a[0] + s * d[0], a[1] + s * d[1]]);
            w * (t[0] * d[0] + t[1] * d[1])
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimitiveOneForm {
    /// `∫_e θ` on every mesh edge, oriented from lower to higher index.
    pub edge_values: Vec<f64>,
    /// Largest `|θ|_g` over all quadrature points.
    pub sup_norm: f64,
    pub min_norm: f64,
    pub samples: usize,
    /// Worst `|∮_∂T θ − ∫_T ω| / ∫_T ω` over triangles.
    pub stokes_residual: f64,
}

pub fn bounded_primitive(mesh: &DiscMesh) -> Result<PrimitiveOneForm, HyperbolicError> {
    if mesh.model != Model::Hyperbolic {
        return Err(HyperbolicError::InvalidParameters("the primitive lives on the hyperbolic disc".into()));
    }
    let table = mesh.edge_table();
    let edge_values: Vec<f64> =
        table.edges.iter().map(|&[a, b]| theta_line_integral(mesh.vertices[a], mesh.vertices[b])).collect();
    let (mut sup_norm, mut min_norm, mut samples) = (0.0f64, f64::INFINITY, 0);
    let mut stokes_residual: f64 = 0.0;
    for (t, te) in table.tri_edges.iter().enumerate() {
        let p = mesh.corners(t);
        for (b, _) in DUNAVANT7 {
            let v = theta_norm(barycentric_point(p, b));
            sup_norm = sup_norm.max(v);
            min_norm = min_norm.min(v);
            samples += 1;
        }
        let circulation: f64 = te.iter().map(|&(e, s)| s * edge_values[e]).sum();
        let area = mesh.triangle_area(t);
        debug_assert!(signed_area(p) > 0.0);
        stokes_residual = stokes_residual.max((circulation - area).abs() / area);
    }
    Ok(PrimitiveOneForm { edge_values, sup_norm, min_norm, samples, stokes_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_norm_at_origin() {
        // At z = 0: w = i, w' = 2i, so θ = −2 db and λ = 2.
        let t = theta([0.0, 0.0]);
        assert!((t[0]).abs() < 1e-15 && (t[1] + 2.0).abs() < 1e-15);
        assert!((theta_norm([0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stokes_on_a_coarse_mesh() {
        let m = crate::mesh::build_disc_mesh(Model::Hyperbolic, 2.0, 0.4).unwrap();
        let p = bounded_primitive(&m).unwrap();
        assert!(p.stokes_residual < 1e-4, "{}", p.stokes_residual);
        assert!((p.sup_norm - 1.0).abs() < 1e-12 && (p.min_norm - 1.0).abs() < 1e-12);
    }
}
