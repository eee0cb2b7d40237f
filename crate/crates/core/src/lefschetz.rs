//! The sl₂ calculus generated by `L = ω ∧ ·` and its dual `Λ`, the symplectic
//! star, primitivity and the Lefschetz decomposition.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::basis::{binomial, contraction_sign};
use crate::bigraded::{i_pow, weil_operator};
use crate::error::AlgebraError;
use crate::exterior::{apply_compound, complement, hodge_star, inner, norm, wedge};
use crate::form::KForm;
use crate::scalar::{factorial, falling_factorial, Real, Scalar};
use crate::triple::CompatibleTriple;

/// `L a = ω ∧ a`.
pub fn lefschetz_l<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(a)?;
    wedge(&t.omega_form(), a)
}

/// `L^r a`, or `DegreeOverflow` when `k + 2r > 2n`.
pub fn lefschetz_pow<T: Scalar>(a: &KForm<T>, r: usize, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(a)?;
    let top = a.dim();
    if a.degree() + 2 * r > top {
        return Err(AlgebraError::DegreeOverflow { degree: a.degree() + 2 * r, top });
    }
    let omega = t.omega_form();
    let mut out = a.clone();
    for _ in 0..r {
        out = wedge(&omega, &out)?;
    }
    Ok(out)
}

/// `L^r a` with forms above the top degree read as zero (`None`).
pub fn lefschetz_pow_or_zero<T: Scalar>(a: &KForm<T>, r: usize, t: &CompatibleTriple<T>) -> Option<KForm<T>> {
    lefschetz_pow(a, r, t).ok()
}

/// `Λa = Σ_{i<j} (ω^{-1})^{ij} ι_{∂_i} ι_{∂_j} a`.
pub fn dual_lefschetz<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(a)?;
    if a.degree() < 2 {
        return Err(AlgebraError::DegreeUnderflow { degree: a.degree(), required: 2 });
    }
    let w = t.omega_inv();
    let dim = a.dim();
    let mut out = KForm::zero(a.n(), a.degree() - 2);
    for (m, c) in a.terms() {
        for i in 0..dim {
            if m & (1 << i) == 0 {
                continue;
            }
            for j in i + 1..dim {
                if m & (1 << j) == 0 || w[(i, j)].is_zero() {
                    continue;
                }
                let inner_mask = m ^ (1 << j);
                let s = contraction_sign(j as u32, m) * contraction_sign(i as u32, inner_mask);
                let v = c.clone() * Complex::new(w[(i, j)].clone(), T::zero());
                out.add_at(inner_mask ^ (1 << i), if s > 0 { v } else { -v });
            }
        }
    }
    Ok(out)
}

/// `Λ^r a`, or `DegreeUnderflow` when `2r > k`.
pub fn dual_lefschetz_pow<T: Scalar>(a: &KForm<T>, r: usize, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    let mut out = a.clone();
    for _ in 0..r {
        out = dual_lefschetz(&out, t)?;
    }
    Ok(out)
}

fn dual_or_zero<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Option<KForm<T>> {
    dual_lefschetz(a, t).ok()
}

/// `(-1)^k ∗ L ∗ a`, the metric route to Λ.
pub fn dual_lefschetz_via_star<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    if a.degree() < 2 {
        return Err(AlgebraError::DegreeUnderflow { degree: a.degree(), required: 2 });
    }
    let out = hodge_star(&lefschetz_l(&hodge_star(a, t)?, t)?, t)?;
    Ok(if a.degree().is_multiple_of(2) { out } else { -out })
}

/// `∗_s β`, defined by `α ∧ ∗_s β = ω^{-1}(α, β) ω^n/n!`.
pub fn symplectic_star<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(a)?;
    let raised = apply_compound(t.omega_inv_induced(a.degree()), a);
    Ok(complement(&raised, t.volume()))
}

/// `∗_s L ∗_s a`, the symplectic route to Λ.
pub fn dual_lefschetz_via_symplectic_star<T: Scalar>(
    a: &KForm<T>,
    t: &CompatibleTriple<T>,
) -> Result<KForm<T>, AlgebraError> {
    if a.degree() < 2 {
        return Err(AlgebraError::DegreeUnderflow { degree: a.degree(), required: 2 });
    }
    symplectic_star(&lefschetz_l(&symplectic_star(a, t)?, t)?, t)
}

/// Both primitivity conditions, measured in the metric norm.
#[derive(Clone, Debug, PartialEq)]
pub struct Primitivity {
    /// `‖Λa‖`, zero by degree when `k < 2`.
    pub lambda_residual: f64,
    /// `‖L^{n-k+1} a‖`, zero by degree when `k < 2`.
    pub power_residual: f64,
    pub primitive: bool,
    /// The input was exactly zero, so both conditions hold vacuously.
    pub zero_input: bool,
}

/// Tests `Λa = 0` against `tol` and reports both residuals.
pub fn is_primitive<T: Real>(a: &KForm<T>, t: &CompatibleTriple<T>, tol: f64) -> Result<Primitivity, AlgebraError> {
    t.check_form(a)?;
    let (n, k) = (t.n(), a.degree());
    if k > n {
        return Err(AlgebraError::AboveMiddleDegree { degree: k, n });
    }
    let lambda_residual = match dual_or_zero(a, t) {
        Some(la) => norm(&la, t)?.approx_f64(),
        None => 0.0,
    };
    let power_residual = match lefschetz_pow_or_zero(a, n - k + 1, t) {
        Some(lp) => norm(&lp, t)?.approx_f64(),
        None => 0.0,
    };
    Ok(Primitivity { lambda_residual, power_residual, primitive: lambda_residual < tol, zero_input: a.is_zero() })
}

/// Primitive pieces `β_{k-2r}` with `a = Σ_r L^r β_{k-2r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LefschetzComponents<T> {
    n: usize,
    k: usize,
    components: BTreeMap<usize, KForm<T>>,
}

impl<T: Scalar> LefschetzComponents<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// `β_{k-2r}` keyed by `r`.
    pub fn components(&self) -> &BTreeMap<usize, KForm<T>> {
        &self.components
    }

    pub fn component(&self, r: usize) -> Option<&KForm<T>> {
        self.components.get(&r)
    }

    /// Replaces `β_{k-2r}`; used to probe uniqueness of the decomposition.
    pub fn with_component(mut self, r: usize, beta: KForm<T>) -> Self {
        self.components.insert(r, beta);
        self
    }

    pub fn reconstruct(&self, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
        let mut out = KForm::zero(self.n, self.k);
        for (&r, beta) in &self.components {
            out = out.checked_add(&lefschetz_pow(beta, r, t)?)?;
        }
        Ok(out)
    }
}

/// Admissible Lefschetz levels `r` for degree `k`.
pub fn level_range(n: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    k.saturating_sub(n)..=k / 2
}

/// `Λ^r L^r β = c β` for primitive `β` of degree `m`, with
/// `c = r! (n-m)! / (n-m-r)!`.
pub fn sl2_constant(n: usize, m: usize, r: usize) -> u64 {
    factorial(r) * falling_factorial(n - m, r)
}

/// Lefschetz decomposition by the sl₂ recursion: the highest level is read
/// off with `Λ^r`, peeled away, and the next level follows.
pub fn primitive_decompose<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<LefschetzComponents<T>, AlgebraError> {
    t.check_form(a)?;
    let (n, k) = (t.n(), a.degree());
    let mut rest = a.clone();
    let mut components = BTreeMap::new();
    for r in level_range(n, k).rev() {
        let m = k - 2 * r;
        let c = T::from_uint(sl2_constant(n, m, r));
        let beta = dual_lefschetz_pow(&rest, r, t)?.scale_real(&(T::one() / c));
        rest = rest.checked_sub(&lefschetz_pow(&beta, r, t)?)?;
        components.insert(r, beta);
    }
    Ok(LefschetzComponents { n, k, components })
}

/// `C(n,p,q) = i^{p-q} (-1)^{k(k+1)/2} / (n-k)!` with `k = p + q ≤ n`.
pub fn weil_constant<T: Scalar>(n: usize, p: usize, q: usize) -> Result<Complex<T>, AlgebraError> {
    let k = p + q;
    if k > n {
        return Err(AlgebraError::AboveMiddleDegree { degree: k, n });
    }
    let sign = if (k * (k + 1) / 2).is_multiple_of(2) { T::one() } else { -T::one() };
    let phase = i_pow::<T>(p as i64 - q as i64);
    Ok(phase * Complex::new(sign / T::from_uint(factorial(n - k)), T::zero()))
}

fn check_primitive<T: Scalar>(b: &KForm<T>, t: &CompatibleTriple<T>) -> Result<(), AlgebraError> {
    let (n, k) = (t.n(), b.degree());
    if k > n {
        return Err(AlgebraError::AboveMiddleDegree { degree: k, n });
    }
    if let Some(lb) = dual_or_zero(b, t) {
        let scale = T::from_uint(binomial(2 * n, k) as u64) * (T::one() + b.max_abs());
        let r = lb.max_abs();
        if r > T::tolerance() * scale {
            return Err(AlgebraError::NotPrimitive { residual: r.approx_f64() });
        }
    }
    Ok(())
}

/// `∗(L^r B)/r! − (−1)^{k(k+1)/2} L^{n−k−r} 𝒥B/(n−k−r)!` for primitive `B`.
pub fn weil_relation_difference<T: Scalar>(b: &KForm<T>, r: usize, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(b)?;
    check_primitive(b, t)?;
    let (n, k) = (t.n(), b.degree());
    if r > n - k {
        return Err(AlgebraError::IndexRange(format!("r = {r} exceeds n - k = {}", n - k)));
    }
    let lhs = hodge_star(&lefschetz_pow(b, r, t)?, t)?.scale_real(&(T::one() / T::from_uint(factorial(r))));
    let sign = if (k * (k + 1) / 2) % 2 == 0 { T::one() } else { -T::one() };
    let rhs = lefschetz_pow(&weil_operator(b, t)?, n - k - r, t)?
        .scale_real(&(sign / T::from_uint(factorial(n - k - r))));
    lhs.checked_sub(&rhs)
}

pub fn weil_relation_residual<T: Real>(b: &KForm<T>, r: usize, t: &CompatibleTriple<T>) -> Result<f64, AlgebraError> {
    Ok(norm(&weil_relation_difference(b, r, t)?, t)?.approx_f64())
}

/// `[L^i, Λ]a − i(k−n+i−1) L^{i−1}a`; `None` when every term lies above
/// the top degree.
pub fn commutator_difference<T: Scalar>(a: &KForm<T>, i: usize, t: &CompatibleTriple<T>) -> Result<Option<KForm<T>>, AlgebraError> {
    t.check_form(a)?;
    if i == 0 {
        return Err(AlgebraError::IndexRange("commutator power i must be at least 1".into()));
    }
    let (n, k) = (t.n() as i64, a.degree() as i64);
    let Some(rhs_base) = lefschetz_pow_or_zero(a, i - 1, t) else {
        return Ok(None);
    };
    let coef = i as i64 * (k - n + i as i64 - 1);
    let mut diff = rhs_base.scale_real(&T::from_int(-coef));
    if let Some(la) = dual_or_zero(a, t) {
        if let Some(lla) = lefschetz_pow_or_zero(&la, i, t) {
            diff = diff.checked_add(&lla)?;
        }
    }
    if let Some(la) = lefschetz_pow_or_zero(a, i, t) {
        diff = diff.checked_sub(&dual_lefschetz(&la, t)?)?;
    }
    Ok(Some(diff))
}

pub fn commutator_check<T: Real>(a: &KForm<T>, i: usize, t: &CompatibleTriple<T>) -> Result<f64, AlgebraError> {
    Ok(match commutator_difference(a, i, t)? {
        Some(d) => norm(&d, t)?.approx_f64(),
        None => 0.0,
    })
}

/// `(n−k−i+j)! i! / ((n−k−i)! (i−j)!)`, exact.
pub fn inner_scaling_factor(n: usize, k: usize, i: usize, j: usize) -> u64 {
    falling_factorial(n - k - i + j, j) * falling_factorial(i, j)
}

/// `(⟨L^i B, L^i A⟩, factor · ⟨L^{i−j} B, L^{i−j} A⟩)` for primitive `B`.
pub fn inner_scaling_check<T: Scalar>(
    b: &KForm<T>,
    a: &KForm<T>,
    i: usize,
    j: usize,
    t: &CompatibleTriple<T>,
) -> Result<(Complex<T>, Complex<T>), AlgebraError> {
    t.check_form(b)?;
    t.check_form(a)?;
    let (n, k) = (t.n(), b.degree());
    if a.degree() != k {
        return Err(AlgebraError::DegreeMismatch { expected: k, found: a.degree() });
    }
    if k > n || j > i || i > n - k {
        return Err(AlgebraError::IndexRange(format!("need 0 <= j <= i <= n - k, got j = {j}, i = {i}, n - k = {}", n as i64 - k as i64)));
    }
    check_primitive(b, t)?;
    let lhs = inner(&lefschetz_pow(b, i, t)?, &lefschetz_pow(a, i, t)?, t)?;
    let low = inner(&lefschetz_pow(b, i - j, t)?, &lefschetz_pow(a, i - j, t)?, t)?;
    let f = T::from_uint(inner_scaling_factor(n, k, i, j));
    Ok((lhs, low * Complex::new(f, T::zero())))
}
