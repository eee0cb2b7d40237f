//! Dirichlet eigenvalues on meshed discs with residual certificates, and
//! Richardson extrapolation in the mesh size.

use serde::{Deserialize, Serialize};

use crate::bound::gromov_bound;
use crate::fem::{assemble_one_forms, assemble_scalar, whitney_complex, WhitneyComplex};
use crate::lanczos::{smallest_eigenpairs, LanczosOptions, ShiftInvert};
use crate::mesh::{DiscMesh, Domain, Model};
use crate::primitive::bounded_primitive;
use crate::sparse::{Factor, SparseSymmetricMatrix};
use crate::HyperbolicError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub degree: usize,
    pub model: Model,
    pub radius: f64,
    pub h: f64,
    /// Actual radial spacing, the parameter used for extrapolation.
    pub spacing: f64,
    pub vertices: usize,
    pub unknowns: usize,
    pub eigenvalues: Vec<f64>,
    /// `‖Ax − λMx‖ / ‖Mx‖` per eigenvalue.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    /// Measured `sup |θ|_g` on the mesh (hyperbolic model only).
    pub theta_sup: Option<f64>,
    /// `c_{1,k} · theta_sup⁻²`; absent at the middle degree and for the
    /// Euclidean model.
    pub derived_bound: Option<f64>,
}

impl SpectralResult {
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn certified(&self, rel: f64) -> bool {
        self.eigenvalues.iter().zip(&self.residuals).all(|(l, r)| *r < rel * l)
    }
}

/// `A = K`, `M` sparse, `A` factored by Cholesky.
pub struct ScalarProblem {
    pub stiffness: SparseSymmetricMatrix,
    pub mass: SparseSymmetricMatrix,
    factor: Factor,
}

impl ScalarProblem {
    pub fn new(stiffness: SparseSymmetricMatrix, mass: SparseSymmetricMatrix) -> Result<Self, HyperbolicError> {
        let factor = Factor::cholesky(&stiffness)?;
        Ok(Self { stiffness, mass, factor })
    }
}

impl ShiftInvert for ScalarProblem {
    fn dim(&self) -> usize {
        self.stiffness.nrows
    }
    fn solve(&self, y: &[f64]) -> Vec<f64> {
        self.factor.solve(y)
    }
    fn apply_a(&self, x: &[f64]) -> Vec<f64> {
        self.stiffness.matvec(x)
    }
    fn apply_m(&self, x: &[f64]) -> Vec<f64> {
        self.mass.matvec(x)
    }
}

/// Top-degree problem in mixed form. With `σ` on all edges and `β` on
/// triangles, eliminating `σ = M₁⁻¹ Cᵀ M₂ β` leaves `S β = λ M₂ β` with
/// `S = M₂ C M₁⁻¹ Cᵀ M₂`. `S⁻¹` is applied through the saddle system
/// `[[M₁, −CᵀM₂], [−M₂C, 0]]`.
pub struct TopDegreeProblem {
    complex: WhitneyComplex,
    saddle: Factor,
    mass1: Factor,
}

impl TopDegreeProblem {
    pub fn new(mesh: &DiscMesh) -> Result<Self, HyperbolicError> {
        let complex = whitney_complex(mesh, false)?;
        let ne = complex.mass1.nrows;
        let nt = complex.curl.nrows;
        let m2c = complex.curl.scale_rows(&complex.mass2);
        let mut t: Vec<(usize, usize, f64)> = Vec::new();
        for r in 0..ne {
            t.extend(complex.mass1.row(r).map(|(c, v)| (r, c, v)));
        }
        for r in 0..nt {
            for (c, v) in m2c.row(r) {
                t.push((ne + r, c, -v));
                t.push((c, ne + r, -v));
            }
        }
        let saddle = Factor::lu(&SparseSymmetricMatrix::from_triplets(ne + nt, ne + nt, t))?;
        let mass1 = Factor::cholesky(&complex.mass1)?;
        Ok(Self { complex, saddle, mass1 })
    }
}

impl ShiftInvert for TopDegreeProblem {
    fn dim(&self) -> usize {
        self.complex.curl.nrows
    }
    fn solve(&self, y: &[f64]) -> Vec<f64> {
        let ne = self.complex.mass1.nrows;
        let mut rhs = vec![0.0; ne];
        rhs.extend(y.iter().map(|v| -v));
        self.saddle.solve(&rhs).split_off(ne)
    }
    fn apply_a(&self, x: &[f64]) -> Vec<f64> {
        let m2x: Vec<f64> = x.iter().zip(&self.complex.mass2).map(|(a, b)| a * b).collect();
        let sigma = self.mass1.solve(&self.complex.curl.transpose().matvec(&m2x));
        self.complex.curl.matvec(&sigma).iter().zip(&self.complex.mass2).map(|(a, b)| a * b).collect()
    }
    fn apply_m(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.complex.mass2).map(|(a, b)| a * b).collect()
    }
}

/// Radial spacing actually used by the mesh generator.
pub fn mesh_spacing(mesh: &DiscMesh) -> f64 {
    match mesh.domain {
        Domain::Disc { radius } => radius / (radius / mesh.h).ceil(),
        Domain::Square { side } => side / (side / mesh.h).ceil(),
    }
}

/// The `count` smallest Dirichlet eigenvalues in degree 0, 1 or 2.
pub fn dirichlet_eigenvalues(
    mesh: &DiscMesh,
    degree: usize,
    count: usize,
    opts: &LanczosOptions,
) -> Result<SpectralResult, HyperbolicError> {
    let (outcome, unknowns) = match degree {
        0 => {
            let a = assemble_scalar(mesh)?;
            let p = ScalarProblem::new(a.stiffness, a.mass)?;
            (smallest_eigenpairs(&p, count, opts)?, p.dim())
        }
        1 => {
            let (a, _) = assemble_one_forms(mesh)?;
            let p = ScalarProblem::new(a.stiffness, a.mass)?;
            (smallest_eigenpairs(&p, count, opts)?, p.dim())
        }
        2 => {
            let p = TopDegreeProblem::new(mesh)?;
            (smallest_eigenpairs(&p, count, opts)?, p.dim())
        }
        d => return Err(HyperbolicError::InvalidParameters(format!("degree {d} on a surface"))),
    };
    let theta_sup = match mesh.model {
        Model::Hyperbolic => Some(bounded_primitive(mesh)?.sup_norm),
        Model::Euclidean => None,
    };
    let derived_bound = match (theta_sup, degree) {
        (Some(s), 0 | 2) => Some(gromov_bound(1, degree, s)?.value),
        _ => None,
    };
    Ok(SpectralResult {
        degree,
        model: mesh.model,
        radius: mesh.radius(),
        h: mesh.h,
        spacing: mesh_spacing(mesh),
        vertices: mesh.vertex_count(),
        unknowns,
        eigenvalues: outcome.pairs.iter().map(|p| p.value).collect(),
        residuals: outcome.pairs.iter().map(|p| p.residual).collect(),
        iterations: outcome.iterations,
        theta_sup,
        derived_bound,
    })
}

pub fn dirichlet_lambda1(mesh: &DiscMesh, degree: usize) -> Result<SpectralResult, HyperbolicError> {
    dirichlet_eigenvalues(mesh, degree, 1, &LanczosOptions::default())
}

/// Extrapolates `λ(h) = λ* + C h^p` from two mesh sizes.
pub fn richardson(h1: f64, l1: f64, h2: f64, l2: f64, order: f64) -> f64 {
    let r = (h1 / h2).powf(order);
    (r * l2 - l1) / (r - 1.0)
}

/// Observed convergence order from three levels with a common ratio
/// `h1/h2 = h2/h3`.
pub fn observed_order(h1: f64, l1: f64, h2: f64, l2: f64, l3: f64) -> f64 {
    ((l1 - l2) / (l2 - l3)).abs().ln() / (h1 / h2).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_is_exact_for_pure_power_laws() {
        let f = |h: f64| 2.0 + 3.0 * h * h;
        assert!((richardson(0.2, f(0.2), 0.1, f(0.1), 2.0) - 2.0).abs() < 1e-14);
        let g = |h: f64| 1.0 + h.powi(2);
        assert!((observed_order(0.4, g(0.4), 0.2, g(0.2), g(0.1)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_disc_is_certified() {
        let m = crate::mesh::build_disc_mesh(Model::Hyperbolic, 1.0, 0.2).unwrap();
        let r = dirichlet_lambda1(&m, 0).unwrap();
        assert!(r.certified(1e-8));
        assert!(r.lambda1() > 0.25);
        assert!((r.derived_bound.unwrap() - 0.25).abs() < 1e-12);
    }
}
