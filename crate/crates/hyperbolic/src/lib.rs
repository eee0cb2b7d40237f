//! Finite-element spectral checks on the Poincaré disc: geodesic-ball
//! meshes, P1 and Whitney Hodge Laplacians with Dirichlet conditions, a
//! shift-invert Lanczos eigensolver with residual certificates, and the
//! explicit spectral-gap constant derived from a bounded primitive of `ω`.

use thiserror::Error;

pub mod annulus;
pub mod bound;
pub mod cutoff;
pub mod fem;
pub mod geometry;
pub mod lanczos;
pub mod mesh;
pub mod primitive;
pub mod sparse;
pub mod spectral;

pub use annulus::{annulus_decay, AnnulusDecayTable};
pub use bound::{gromov_bound, GapBound};
pub use cutoff::{cutoff_family, CutoffProfile};
pub use mesh::{build_disc_mesh, DiscMesh, Model};
pub use primitive::{bounded_primitive, PrimitiveOneForm};
pub use sparse::SparseSymmetricMatrix;
pub use spectral::{dirichlet_lambda1, SpectralResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperbolicError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("mesh needs about {needed} vertices, above the budget of {cap}")]
    VertexBudget { needed: usize, cap: usize },
    #[error("triangle {0} is degenerate")]
    DegenerateTriangle(usize),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("Lanczos did not converge after {iterations} steps; best estimate {best} with residual {residual:e}")]
    NotConverged { best: f64, residual: f64, iterations: usize },
    #[error("no gap is claimed at the middle degree k = n = {0}")]
    MiddleDegree(usize),
    #[error("cutoff with eps = {eps} needs a taper of width {width}, which does not fit in radius {radius}")]
    InfeasibleCutoff { eps: f64, width: f64, radius: f64 },
    #[error("mesh cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Algebra(#[from] llab_core::AlgebraError),
}
