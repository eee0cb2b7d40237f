//! Pointwise exterior algebra on a `2n`-dimensional space with a compatible
//! triple `(ω, J, g)`, and the Lefschetz `sl₂` calculus built on it.
//!
//! The engine is generic over [`Scalar`]: run it over `f64` for randomized
//! sweeps or over exact rationals when an identity must hold with zero
//! residual.

pub mod analysis;
pub mod basis;
pub mod bigraded;
pub mod dense;
pub mod error;
pub mod exterior;
pub mod form;
pub mod json;
pub mod lefschetz;
pub mod random;
pub mod scalar;
pub mod triple;

pub use bigraded::{pq_decompose, pq_project, weil_operator, BigradedForm};
pub use error::AlgebraError;
pub use exterior::{hodge_star, inner, j_action, norm, wedge};
pub use form::KForm;
pub use lefschetz::{
    commutator_check, dual_lefschetz, inner_scaling_check, is_primitive, lefschetz_l, primitive_decompose,
    symplectic_star, weil_relation_residual, LefschetzComponents,
};
pub use scalar::{Real, Scalar};
pub use triple::CompatibleTriple;

/// Exact rational scalar for zero-residual identity checks.
pub type Rational = num_rational::BigRational;

pub type Form = KForm<f64>;
pub type Triple = CompatibleTriple<f64>;
pub type Bigraded = BigradedForm<f64>;
pub type Components = LefschetzComponents<f64>;

pub type Form32 = KForm<f32>;
pub type Triple32 = CompatibleTriple<f32>;

pub type ExactForm = KForm<Rational>;
pub type ExactTriple = CompatibleTriple<Rational>;
