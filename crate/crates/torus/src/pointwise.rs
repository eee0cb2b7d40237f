//! Constant (pointwise) operators on `Λ^k`, assembled once per degree.
//!
//! On a flat torus with a constant triple, `L`, `Λ`, `J`, the type
//! projectors and the Lefschetz level projectors act identically on every
//! Fourier mode, so they are cached here as coordinate matrices.

use llab_core::analysis::{gram, operator_matrix, CMat};
use llab_core::basis::{binomial, masks, rank, wedge_sign};
use llab_core::bigraded::{pq_project, type_range};
use llab_core::lefschetz::{dual_lefschetz, lefschetz_l, lefschetz_pow, level_range, primitive_decompose};
use llab_core::{j_action, Triple};
use nalgebra::Cholesky;
use num_complex::Complex;

use crate::TorusError;

pub type C = Complex<f64>;

#[derive(Clone, Debug)]
pub struct DegreeOps {
    pub k: usize,
    pub dim: usize,
    /// `G[i][j] = ⟨e_j, e_i⟩`, so `⟨a, b⟩ = b^H G a`.
    pub gram: CMat,
    pub gram_inv: CMat,
    /// `Λ: Λ^k → Λ^{k-2}`; empty for `k < 2`.
    pub lambda: CMat,
    /// `L: Λ^k → Λ^{k+2}`; empty above `2n - 2`.
    pub l: CMat,
    pub j: CMat,
    /// `Π^{p,q}` keyed by `p`.
    pub type_proj: Vec<(usize, CMat)>,
    /// `a ↦ β_{k-2r}(a) ∈ Λ^{k-2r}` keyed by `r`.
    pub level_comp: Vec<(usize, CMat)>,
    /// `a ↦ L^r β_{k-2r}(a)` keyed by `r`.
    pub level_proj: Vec<(usize, CMat)>,
    /// Upper factor `U` with `G = U^H U`, so `‖a‖ = |U a|`.
    pub metric: CMat,
}

impl DegreeOps {
    pub fn type_projector(&self, p: usize) -> Option<&CMat> {
        self.type_proj.iter().find(|(q, _)| *q == p).map(|(_, m)| m)
    }

    pub fn level_component(&self, r: usize) -> Option<&CMat> {
        self.level_comp.iter().find(|(q, _)| *q == r).map(|(_, m)| m)
    }

    pub fn level_projector(&self, r: usize) -> Option<&CMat> {
        self.level_proj.iter().find(|(q, _)| *q == r).map(|(_, m)| m)
    }
}

#[derive(Clone, Debug)]
pub struct Pointwise {
    pub n: usize,
    pub degrees: Vec<DegreeOps>,
}

fn empty(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

impl Pointwise {
    pub fn new(t: &Triple) -> Result<Self, TorusError> {
        let n = t.n();
        let top = 2 * n;
        let mut degrees = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let dim = binomial(top, k);
            let g = gram(t, k)?;
            let gram_inv = g.clone().try_inverse().ok_or(TorusError::SingularGram(k))?;
            let lambda = if k >= 2 {
                operator_matrix(n, k, k - 2, |a| dual_lefschetz(a, t))?
            } else {
                empty(0, dim)
            };
            let l = if k + 2 <= top { operator_matrix(n, k, k + 2, |a| lefschetz_l(a, t))? } else { empty(0, dim) };
            let j = operator_matrix(n, k, k, |a| j_action(a, t))?;
            let type_proj = type_range(n, k)
                .map(|p| Ok((p, operator_matrix(n, k, k, |a| pq_project(a, p, k - p, t))?)))
                .collect::<Result<Vec<_>, TorusError>>()?;
            let mut level_comp = Vec::new();
            let mut level_proj = Vec::new();
            for r in level_range(n, k) {
                let beta = operator_matrix(n, k, k - 2 * r, |a| {
                    Ok(primitive_decompose(a, t)?.component(r).cloned().expect("level in range"))
                })?;
                let lift = operator_matrix(n, k - 2 * r, k, |b| lefschetz_pow(b, r, t))?;
                level_proj.push((r, lift * &beta));
                level_comp.push((r, beta));
            }
            let metric = Cholesky::new(g.clone()).ok_or(TorusError::SingularGram(k))?.l().adjoint();
            degrees.push(DegreeOps { k, dim, gram: g, gram_inv, lambda, l, j, type_proj, level_comp, level_proj, metric });
        }
        Ok(Self { n, degrees })
    }

    pub fn degree(&self, k: usize) -> &DegreeOps {
        &self.degrees[k]
    }

    /// `⟨a, b⟩ = b^H G_k a`.
    pub fn inner(&self, k: usize, a: &nalgebra::DVector<C>, b: &nalgebra::DVector<C>) -> C {
        (b.adjoint() * &self.degrees[k].gram * a)[(0, 0)]
    }

    pub fn norm_sqr(&self, k: usize, a: &nalgebra::DVector<C>) -> f64 {
        self.inner(k, a, a).re
    }

    /// g-adjoint of `A: Λ^k → Λ^l`, that is `G_k^{-1} A^H G_l`.
    pub fn adjoint(&self, a: &CMat, k: usize, l: usize) -> CMat {
        &self.degrees[k].gram_inv * a.adjoint() * &self.degrees[l].gram
    }
}

/// Coordinate matrix of `v ∧ ·: Λ^k → Λ^{k+1}` for a covector `v`.
pub fn wedge_matrix(n: usize, k: usize, v: &[C]) -> CMat {
    let dim = 2 * n;
    let mut m = CMat::zeros(binomial(dim, k + 1), binomial(dim, k));
    if k + 1 > dim {
        return m;
    }
    for (col, mask) in masks(dim, k).enumerate() {
        for (j, vj) in v.iter().enumerate() {
            let bit = 1u32 << j;
            if mask & bit != 0 || (vj.re == 0.0 && vj.im == 0.0) {
                continue;
            }
            let s = f64::from(wedge_sign(bit, mask));
            m[(rank(mask | bit), col)] += vj * s;
        }
    }
    m
}
