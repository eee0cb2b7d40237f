//! Randomized operator identities on finite-mode forms: the `d^Λ`/`d*`
//! norm identity on pure types, the Lefschetz splitting of the `d + d^Λ`
//! energy, and the Kähler identity `Δ_d = 2Δ_∂̄`.

use llab_core::analysis::CMat;
use llab_core::bigraded::type_range;
use llab_core::lefschetz::level_range;
use llab_core::random::case_rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{CVec, FourierComplex, ModeForm};
use crate::pointwise::C;

/// Modes carried by one random form.
pub const ACTIVE_MODES: usize = 8;

pub fn random_coeffs<R: Rng>(rng: &mut R, dim: usize) -> CVec {
    CVec::from_fn(dim, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// A random finite-mode form with every coefficient passed through `proj`.
pub fn random_projected<R: Rng>(fc: &FourierComplex, rng: &mut R, k: usize, proj: &CMat) -> ModeForm {
    let dim = fc.dim(k as isize);
    fc.random_form(rng, k, ACTIVE_MODES, |r| proj * random_coeffs(r, dim))
}

/// A random type `(p, k - p)` form with `(k, p)` drawn uniformly.
fn random_pure<R: Rng>(fc: &FourierComplex, rng: &mut R) -> (ModeForm, usize) {
    let n = fc.n();
    let k = rng.random_range(0..=2 * n);
    let types: Vec<usize> = type_range(n, k).collect();
    let p = types[rng.random_range(0..types.len())];
    let proj = fc.pointwise().degree(k).type_projector(p).expect("type in range");
    (random_projected(fc, rng, k, proj), p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L8Report {
    pub n: usize,
    pub samples: usize,
    /// `max |‖d^Λα‖² − ‖d*α‖²| / ‖α‖²`.
    pub max_residual: f64,
    pub max_abs_residual: f64,
    pub zero_inputs: usize,
}

/// `‖d^Λα‖ = ‖d*α‖` for forms of pure type.
pub fn verify_lemma_l8(fc: &FourierComplex, samples: usize, seed: u64) -> L8Report {
    let rows: Vec<(f64, f64, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(seed, "torus-l8", i as u64);
            let (a, _) = random_pure(fc, &mut rng);
            let na = fc.norm_sqr(&a);
            let dl = fc.norm_sqr(&fc.apply(&a, -1, |xi, k| fc.d_lambda(xi, k)));
            let ds = fc.norm_sqr(&fc.apply(&a, -1, |xi, k| fc.d_star(xi, k)));
            let diff = (dl - ds).abs();
            if na == 0.0 {
                (0.0, diff, true)
            } else {
                (diff / na, diff, false)
            }
        })
        .collect();
    L8Report {
        n: fc.n(),
        samples,
        max_residual: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        max_abs_residual: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        zero_inputs: rows.iter().filter(|r| r.2).count(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L10Degree {
    pub k: usize,
    pub cases: usize,
    /// Spread of `(‖dα‖² + ‖d^Λα‖²) / Σ_r ‖dβ_{k-2r}‖²`.
    pub c_min: f64,
    pub c_max: f64,
    /// `max |⟨L^p 𝒟β_{k-2p}, L^q β_{k-2q}⟩|` over `p ≠ q`, relative to the
    /// product of the norms.
    pub max_cross: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L10Report {
    pub n: usize,
    pub samples: usize,
    pub degrees: Vec<L10Degree>,
    pub max_cross: f64,
    /// `max |(‖dα‖² + ‖d^Λα‖²) / (‖dα‖² + ‖d*α‖²) − 1|` over primitive
    /// pure-type forms.
    pub primitive_ratio_deviation: f64,
    /// Whether `α = L^r β` with `β` constant has both sides exactly zero.
    pub constant_lift_zero: bool,
}

fn lift(fc: &FourierComplex, a: &ModeForm, r: usize) -> ModeForm {
    let mut out = a.clone();
    for _ in 0..r {
        out = fc.apply(&out, 2, |_, k| fc.l(k));
    }
    out
}

fn energy(fc: &FourierComplex, a: &ModeForm) -> f64 {
    fc.norm_sqr(&fc.apply(a, 1, |xi, k| fc.d(xi, k))) + fc.norm_sqr(&fc.apply(a, -1, |xi, k| fc.d_lambda(xi, k)))
}

fn l10_case(fc: &FourierComplex, k: usize, seed: u64, case: u64) -> (Option<f64>, f64) {
    let n = fc.n();
    let mut rng = case_rng(seed, &format!("torus-l10-{k}"), case);
    let id = CMat::identity(fc.dim(k as isize), fc.dim(k as isize));
    let a = random_projected(fc, &mut rng, k, &id);
    let ops = fc.pointwise().degree(k);
    let levels: Vec<usize> = level_range(n, k).collect();
    let betas: Vec<ModeForm> =
        levels.iter().map(|&r| a.map_coeffs(k - 2 * r, |v| ops.level_component(r).expect("level") * v)).collect();
    let rhs: f64 = betas.iter().map(|b| fc.norm_sqr(&fc.apply(b, 1, |xi, k| fc.d(xi, k)))).sum();
    let lhs = energy(fc, &a);
    let ratio = (rhs > 1e-300).then(|| lhs / rhs);
    let mut cross: f64 = 0.0;
    for (i, &p) in levels.iter().enumerate() {
        let dp = lift(fc, &fc.apply(&betas[i], 0, |xi, k| fc.d_dlambda_operator(xi, k)), p);
        for (j, &q) in levels.iter().enumerate() {
            if i == j {
                continue;
            }
            let lq = lift(fc, &betas[j], q);
            let scale = (fc.norm_sqr(&dp) * fc.norm_sqr(&lq)).sqrt();
            if scale > 0.0 {
                cross = cross.max(fc.inner(&dp, &lq).norm() / scale);
            }
        }
    }
    (ratio, cross)
}

/// Lefschetz splitting of the `d + d^Λ` energy on random finite-mode forms.
pub fn verify_lemma_l10(fc: &FourierComplex, samples: usize, seed: u64) -> L10Report {
    let n = fc.n();
    let degrees: Vec<L10Degree> = (0..=2 * n)
        .map(|k| {
            let rows: Vec<(Option<f64>, f64)> =
                (0..samples as u64).into_par_iter().map(|c| l10_case(fc, k, seed, c)).collect();
            let ratios: Vec<f64> = rows.iter().filter_map(|r| r.0).collect();
            L10Degree {
                k,
                cases: samples,
                c_min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                c_max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                max_cross: rows.iter().map(|r| r.1).fold(0.0, f64::max),
            }
        })
        .collect();

    let primitive_ratio_deviation = (0..samples as u64)
        .into_par_iter()
        .map(|c| {
            let mut rng = case_rng(seed, "torus-l10-primitive", c);
            let k = rng.random_range(0..=n);
            let types: Vec<usize> = type_range(n, k).collect();
            let p = types[rng.random_range(0..types.len())];
            let ops = fc.pointwise().degree(k);
            let proj = ops.type_projector(p).expect("type") * ops.level_projector(0).expect("level 0");
            let a = random_projected(fc, &mut rng, k, &proj);
            let d = fc.norm_sqr(&fc.apply(&a, 1, |xi, k| fc.d(xi, k)));
            let ds = fc.norm_sqr(&fc.apply(&a, -1, |xi, k| fc.d_star(xi, k)));
            let denom = d + ds;
            if denom > 0.0 {
                (energy(fc, &a) / denom - 1.0).abs()
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max);

    let constant_lift_zero = (0..=n).all(|r| {
        let zero = vec![0; 2 * n];
        let beta = ModeForm { k: 0, terms: vec![(zero, CVec::from_element(1, C::new(1.0, 0.0)))] };
        let a = lift(fc, &beta, r);
        energy(fc, &a) == 0.0 && fc.norm_sqr(&fc.apply(&beta, 1, |xi, k| fc.d(xi, k))) == 0.0
    });

    L10Report {
        n,
        samples,
        max_cross: degrees.iter().map(|d| d.max_cross).fold(0.0, f64::max),
        degrees,
        primitive_ratio_deviation,
        constant_lift_zero,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KahlerReport {
    pub n: usize,
    pub samples: usize,
    /// `max ‖Δ_dα − 2Δ_∂̄α‖ / ‖α‖`.
    pub max_residual: f64,
    /// `max ‖(1 − Π^{p,q})Δ_dα‖ / ‖α‖` for `α` of type `(p,q)`.
    pub max_type_leakage: f64,
    /// `max ‖(d − ∂ − ∂̄)α‖ / ‖α‖`.
    pub max_split_residual: f64,
}

/// `Δ_d = 2Δ_∂̄` and bidegree preservation on random pure-type forms.
pub fn verify_kahler_identity(fc: &FourierComplex, samples: usize, seed: u64) -> KahlerReport {
    let rows: Vec<[f64; 3]> = (0..samples as u64)
        .into_par_iter()
        .map(|c| {
            let mut rng = case_rng(seed, "torus-kahler", c);
            let (a, p) = random_pure(fc, &mut rng);
            let na = fc.norm_sqr(&a).sqrt();
            if na == 0.0 {
                return [0.0; 3];
            }
            let lap = fc.apply(&a, 0, |xi, k| fc.laplacian(xi, k));
            let lap_bar = fc.apply(&a, 0, |xi, k| fc.dbar_laplacian(xi, k));
            let diff = lap.sub(&lap_bar.scale(C::new(2.0, 0.0)));
            let proj = fc.pointwise().degree(a.k).type_projector(p).expect("type");
            let leak = lap.map_coeffs(a.k, |v| v - proj * v);
            let split = fc.apply(&a, 1, |xi, k| fc.d(xi, k) - fc.del(xi, k) - fc.dbar(xi, k));
            [fc.norm_sqr(&diff).sqrt() / na, fc.norm_sqr(&leak).sqrt() / na, fc.norm_sqr(&split).sqrt() / na]
        })
        .collect();
    let max = |i: usize| rows.iter().map(|r| r[i]).fold(0.0, f64::max);
    KahlerReport { n: fc.n(), samples, max_residual: max(0), max_type_leakage: max(1), max_split_residual: max(2) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarConvention {
    pub k: usize,
    /// `max ‖d^Λ ∓ ∗𝒥⁻¹d𝒥∗‖ / max(1, ‖d^Λ‖)` over the sampled modes, for the
    /// sign `s = +1` and `s = −1` in `d^Λ = −s ∗𝒥⁻¹d𝒥∗`.
    pub residual_plus: f64,
    pub residual_minus: f64,
}

impl StarConvention {
    /// Signs `s` for which `d^Λ = −s ∗𝒥⁻¹d𝒥∗` holds to `tol`.
    pub fn fitting_signs(&self, tol: f64) -> Vec<i32> {
        let mut out = Vec::new();
        if self.residual_plus < tol {
            out.push(1);
        }
        if self.residual_minus < tol {
            out.push(-1);
        }
        out
    }
}

fn matrix_of(
    n: usize,
    k: usize,
    l: usize,
    f: impl Fn(&llab_core::Form) -> Result<llab_core::Form, llab_core::AlgebraError>,
) -> CMat {
    llab_core::analysis::operator_matrix(n, k, l, f).expect("operator defined on every basis form")
}

/// Measures, per degree, which sign makes `d^Λ` agree with the conjugated
/// differential `−∗𝒥⁻¹d𝒥∗` on `samples` random modes.
pub fn dlambda_star_convention(fc: &FourierComplex, samples: usize, seed: u64) -> Vec<StarConvention> {
    use llab_core::bigraded::{weil_operator, weil_operator_inv};
    let n = fc.n();
    let t = fc.triple();
    let top = 2 * n;
    let star: Vec<CMat> = (0..=top).map(|k| matrix_of(n, k, top - k, |a| llab_core::hodge_star(a, t))).collect();
    let weil: Vec<CMat> = (0..=top).map(|k| matrix_of(n, k, k, |a| weil_operator(a, t))).collect();
    let weil_inv: Vec<CMat> = (0..=top).map(|k| matrix_of(n, k, k, |a| weil_operator_inv(a, t))).collect();
    (0..=top)
        .map(|k| {
            let mut res = [0.0f64; 2];
            if k == 0 {
                return StarConvention { k, residual_plus: 0.0, residual_minus: 0.0 };
            }
            for c in 0..samples as u64 {
                let mut rng = case_rng(seed, "torus-star-convention", c);
                let xi = &fc.modes()[rng.random_range(0..fc.mode_count())];
                let m = top - k;
                let conj = &star[m + 1] * &weil_inv[m + 1] * fc.d(xi, m as isize) * &weil[m] * &star[k];
                let dl = fc.d_lambda(xi, k as isize);
                let scale = dl.norm().max(1.0);
                res[0] = res[0].max((&dl + &conj).norm() / scale);
                res[1] = res[1].max((&dl - &conj).norm() / scale);
            }
            StarConvention { k, residual_plus: res[0], residual_minus: res[1] }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use llab_core::Triple;

    #[test]
    fn identities_hold_on_t2() {
        let fc = FourierComplex::new(1, 2, Triple::standard(1).unwrap()).unwrap();
        let r = verify_lemma_l8(&fc, 40, 3);
        assert!(r.max_residual < 1e-10, "{r:?}");
        let r = verify_kahler_identity(&fc, 40, 3);
        assert!(r.max_residual < 1e-10 && r.max_type_leakage < 1e-10 && r.max_split_residual < 1e-12, "{r:?}");
        let r = verify_lemma_l10(&fc, 10, 3);
        assert!(r.max_cross < 1e-10 && r.constant_lift_zero, "{r:?}");
    }

    #[test]
    fn reports_are_seed_deterministic() {
        let fc = FourierComplex::new(2, 1, Triple::standard(2).unwrap()).unwrap();
        assert_eq!(verify_lemma_l8(&fc, 8, 11), verify_lemma_l8(&fc, 8, 11));
    }
}
