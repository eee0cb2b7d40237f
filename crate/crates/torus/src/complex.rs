//! The Fourier Hodge complex of a flat torus `T^{2n} = R^{2n}/Z^{2n}`.
//!
//! A form `a e^{2πi⟨ξ,x⟩}` with constant `a ∈ Λ^k ⊗ C` is one mode; every
//! operator below is block diagonal over modes. `d` acts on mode `ξ` as
//! `2πi ξ♭ ∧ ·` with `ξ♭ = Σ ξ_j e^j`. Norms are pointwise norms, i.e. the
//! L² norm divided by the volume of the torus.

use std::f64::consts::PI;

use llab_core::analysis::CMat;
use llab_core::basis::binomial;
use llab_core::Triple;
use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;

use crate::pointwise::{wedge_matrix, Pointwise, C};
use crate::TorusError;

pub type Mode = Vec<i32>;
pub type CVec = DVector<C>;

/// Hodge complex of `T^{2n}` truncated to modes with `‖ξ‖_∞ ≤ N`.
#[derive(Clone, Debug)]
pub struct FourierComplex {
    n: usize,
    cutoff: usize,
    triple: Triple,
    modes: Vec<Mode>,
    pw: Pointwise,
}

impl FourierComplex {
    /// Assembles the complex for a constant triple.
    pub fn new(n: usize, cutoff: usize, triple: Triple) -> Result<Self, TorusError> {
        if n == 0 || n > 4 {
            return Err(TorusError::InvalidDimension(n));
        }
        if triple.n() != n {
            return Err(TorusError::InvalidDimension(triple.n()));
        }
        let side = 2 * cutoff as i64 + 1;
        let count = side.checked_pow(2 * n as u32).filter(|&c| c <= 5_000_000).ok_or(TorusError::TooManyModes)?;
        let modes = (0..count)
            .map(|mut idx| {
                (0..2 * n)
                    .map(|_| {
                        let digit = idx % side;
                        idx /= side;
                        (digit - cutoff as i64) as i32
                    })
                    .collect()
            })
            .collect();
        let pw = Pointwise::new(&triple)?;
        Ok(Self { n, cutoff, triple, modes, pw })
    }

    /// Samples a triple field at `probes` points of the torus and accepts it
    /// only if it is constant to `1e-12`.
    pub fn from_field(
        n: usize,
        cutoff: usize,
        field: impl Fn(&[f64]) -> Triple,
        probes: usize,
    ) -> Result<Self, TorusError> {
        let base = field(&vec![0.0; 2 * n]);
        let mut worst: f64 = 0.0;
        for s in 1..=probes {
            // Weyl sequence with golden-ratio style increments.
            let x: Vec<f64> = (0..2 * n).map(|j| ((s as f64) * (0.618_033_988_749_895 + 0.1 * j as f64)).fract()).collect();
            let t = field(&x);
            for (a, b) in [(t.omega(), base.omega()), (t.j(), base.j()), (t.g(), base.g())] {
                worst = worst.max(a.sub(b).max_magnitude());
            }
        }
        if worst > 1e-12 {
            return Err(TorusError::NonConstantTriple { max_deviation: worst });
        }
        Self::new(n, cutoff, base)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn triple(&self) -> &Triple {
        &self.triple
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn pointwise(&self) -> &Pointwise {
        &self.pw
    }

    /// `C(2n, k)`, zero outside `0..=2n`.
    pub fn dim(&self, k: isize) -> usize {
        if k < 0 || k as usize > 2 * self.n {
            0
        } else {
            binomial(2 * self.n, k as usize)
        }
    }

    fn gram(&self, k: isize) -> CMat {
        match self.dim(k) {
            0 => CMat::zeros(0, 0),
            _ => self.pw.degree(k as usize).gram.clone(),
        }
    }

    fn gram_inv(&self, k: isize) -> CMat {
        match self.dim(k) {
            0 => CMat::zeros(0, 0),
            _ => self.pw.degree(k as usize).gram_inv.clone(),
        }
    }

    /// g-adjoint of `A: Λ^k → Λ^l`.
    pub fn adjoint(&self, a: &CMat, k: isize, l: isize) -> CMat {
        self.gram_inv(k) * a.adjoint() * self.gram(l)
    }

    fn zeros(&self, to: isize, from: isize) -> CMat {
        CMat::zeros(self.dim(to), self.dim(from))
    }

    pub fn xi_flat(&self, xi: &[i32]) -> Vec<C> {
        xi.iter().map(|&x| C::new(f64::from(x), 0.0)).collect()
    }

    fn wedge_covector(&self, v: &[C], k: isize) -> CMat {
        if self.dim(k) == 0 || self.dim(k + 1) == 0 {
            return self.zeros(k + 1, k);
        }
        wedge_matrix(self.n, k as usize, v) * C::new(0.0, 2.0 * PI)
    }

    /// `d: Λ^k → Λ^{k+1}` on mode `ξ`.
    pub fn d(&self, xi: &[i32], k: isize) -> CMat {
        self.wedge_covector(&self.xi_flat(xi), k)
    }

    /// `d*: Λ^k → Λ^{k-1}` on mode `ξ`.
    pub fn d_star(&self, xi: &[i32], k: isize) -> CMat {
        self.adjoint(&self.d(xi, k - 1), k - 1, k)
    }

    /// `Λ: Λ^k → Λ^{k-2}`.
    pub fn lambda(&self, k: isize) -> CMat {
        if k < 2 || self.dim(k) == 0 {
            return self.zeros(k - 2, k);
        }
        self.pw.degree(k as usize).lambda.clone()
    }

    /// `L: Λ^k → Λ^{k+2}`.
    pub fn l(&self, k: isize) -> CMat {
        if self.dim(k) == 0 || self.dim(k + 2) == 0 {
            return self.zeros(k + 2, k);
        }
        self.pw.degree(k as usize).l.clone()
    }

    /// `d^Λ = dΛ − Λd: Λ^k → Λ^{k-1}`.
    pub fn d_lambda(&self, xi: &[i32], k: isize) -> CMat {
        self.d(xi, k - 2) * self.lambda(k) - self.lambda(k + 1) * self.d(xi, k)
    }

    /// `Δ_d = dd* + d*d` on `Λ^k`.
    pub fn laplacian(&self, xi: &[i32], k: isize) -> CMat {
        self.d(xi, k - 1) * self.d_star(xi, k) + self.d_star(xi, k + 1) * self.d(xi, k)
    }

    /// `𝒟 = d*d + (d^Λ)* d^Λ` on `Λ^k`.
    pub fn d_dlambda_operator(&self, xi: &[i32], k: isize) -> CMat {
        let dl = self.d_lambda(xi, k);
        self.d_star(xi, k + 1) * self.d(xi, k) + self.adjoint(&dl, k, k - 1) * dl
    }

    /// Type `(1,0)` and `(0,1)` parts of `ξ♭`.
    fn xi_split(&self, xi: &[i32]) -> (Vec<C>, Vec<C>) {
        let v = CVec::from_vec(self.xi_flat(xi));
        let proj = &self.pw.degree(1).type_proj;
        let part = |p: usize| {
            let m = &proj.iter().find(|(q, _)| *q == p).expect("types of degree 1").1;
            (m * &v).iter().copied().collect::<Vec<C>>()
        };
        (part(1), part(0))
    }

    /// `∂: Λ^k → Λ^{k+1}` on mode `ξ`.
    pub fn del(&self, xi: &[i32], k: isize) -> CMat {
        self.wedge_covector(&self.xi_split(xi).0, k)
    }

    /// `∂̄: Λ^k → Λ^{k+1}` on mode `ξ`.
    pub fn dbar(&self, xi: &[i32], k: isize) -> CMat {
        self.wedge_covector(&self.xi_split(xi).1, k)
    }

    /// `Δ_∂̄ = ∂̄∂̄* + ∂̄*∂̄` on `Λ^k`.
    pub fn dbar_laplacian(&self, xi: &[i32], k: isize) -> CMat {
        let up = self.dbar(xi, k);
        let down = self.dbar(xi, k - 1);
        &down * self.adjoint(&down, k - 1, k) + self.adjoint(&up, k, k + 1) * up
    }

    /// Runs `f` on every mode in parallel; output order follows the mode list.
    pub fn map_modes<R: Send>(&self, f: impl Fn(&Mode) -> R + Sync + Send) -> Vec<R> {
        self.modes.par_iter().map(f).collect()
    }

    /// A random form of degree `k` supported on at most `active` modes, each
    /// coefficient drawn by `coeff`.
    pub fn random_form<R: Rng>(
        &self,
        rng: &mut R,
        k: usize,
        active: usize,
        mut coeff: impl FnMut(&mut R) -> CVec,
    ) -> ModeForm {
        let mut picked: Vec<usize> = Vec::with_capacity(active);
        let want = active.min(self.modes.len()).max(1);
        let count = rng.random_range(1..=want);
        while picked.len() < count {
            let i = rng.random_range(0..self.modes.len());
            if !picked.contains(&i) {
                picked.push(i);
            }
        }
        picked.sort_unstable();
        ModeForm { k, terms: picked.into_iter().map(|i| (self.modes[i].clone(), coeff(rng))).collect() }
    }

    pub fn norm_sqr(&self, f: &ModeForm) -> f64 {
        f.terms.iter().map(|(_, c)| self.pw.norm_sqr(f.k, c)).sum()
    }

    /// `Σ_ξ ⟨a_ξ, b_ξ⟩` over common modes.
    pub fn inner(&self, a: &ModeForm, b: &ModeForm) -> C {
        assert_eq!(a.k, b.k);
        let mut acc = C::new(0.0, 0.0);
        for (m, ca) in &a.terms {
            if let Some((_, cb)) = b.terms.iter().find(|(mb, _)| mb == m) {
                acc += self.pw.inner(a.k, ca, cb);
            }
        }
        acc
    }

    /// Applies a mode-wise operator `Λ^k → Λ^{k + shift}`; a target degree
    /// outside `0..=2n` gives the empty form.
    pub fn apply(&self, f: &ModeForm, shift: isize, op: impl Fn(&[i32], isize) -> CMat) -> ModeForm {
        let k = f.k as isize;
        let out = k + shift;
        if self.dim(out) == 0 {
            return ModeForm { k: 0, terms: Vec::new() };
        }
        ModeForm { k: out as usize, terms: f.terms.iter().map(|(m, c)| (m.clone(), op(m, k) * c)).collect() }
    }
}

/// A finite sum of Fourier modes of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeForm {
    pub k: usize,
    pub terms: Vec<(Mode, CVec)>,
}

impl ModeForm {
    pub fn scale(&self, c: C) -> Self {
        Self { k: self.k, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Termwise sum; both sides must carry the same mode list.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let mut terms = self.terms.clone();
        for (m, v) in &other.terms {
            match terms.iter_mut().find(|(mm, _)| mm == m) {
                Some((_, acc)) => *acc += v,
                None => terms.push((m.clone(), v.clone())),
            }
        }
        Self { k: self.k, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C::new(-1.0, 0.0)))
    }

    pub fn map_coeffs(&self, k: usize, f: impl Fn(&CVec) -> CVec) -> Self {
        Self { k, terms: self.terms.iter().map(|(m, v)| (m.clone(), f(v))).collect() }
    }
}
