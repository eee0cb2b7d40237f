//! Fourier Hodge theory on flat tori `T^{2n}` with a constant compatible
//! triple. Every operator is block diagonal over Fourier modes, so harmonic
//! spaces and operator identities reduce to dense algebra per mode.

use llab_core::AlgebraError;
use thiserror::Error;

pub mod complex;
pub mod harmonic;
pub mod identities;
pub mod invariant;
pub mod linalg;
pub mod pointwise;

pub use complex::{FourierComplex, Mode, ModeForm};
pub use harmonic::{harmonic_space, verify_p7_decomposition, HarmonicSpaceReport, P7Report};
pub use identities::{verify_kahler_identity, verify_lemma_l10, verify_lemma_l8, KahlerReport, L10Report, L8Report};
pub use invariant::{anti_invariant_suite, self_dual_invariant_relation, AntiInvariantReport, SelfDualReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error("unsupported half-dimension n = {0}; the torus model needs 1 <= n <= 4")]
    InvalidDimension(usize),
    #[error("triple field is not constant: max deviation {max_deviation:e}")]
    NonConstantTriple { max_deviation: f64 },
    #[error("Gram matrix on degree {0} is singular")]
    SingularGram(usize),
    #[error("degree {k} out of range 0..={top}")]
    DegreeRange { k: usize, top: usize },
    #[error("type ({p},{q}) does not occur in dimension 2n = {dim}")]
    TypeRange { p: usize, q: usize, dim: usize },
    #[error("this suite needs n >= 2, got n = {0}")]
    NeedsNAtLeast2(usize),
    #[error("cutoff 0 leaves no nonzero modes")]
    NoNonzeroModes,
    #[error("mode count exceeds the budget of 5e6")]
    TooManyModes,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
