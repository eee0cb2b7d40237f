//! `J`-invariant and anti-invariant 2-forms: the star normalization on
//! anti-invariant forms, harmonicity of closed anti-invariant forms, and the
//! energy relations for closed invariant forms `α⁺ = fω + α₀`.

use llab_core::analysis::CMat;
use llab_core::random::case_rng;
use llab_core::{hodge_star, Form};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{CVec, FourierComplex, ModeForm};
use crate::harmonic::{harmonic_space, KERNEL_TOL};
use crate::identities::{random_coeffs, ACTIVE_MODES};
use crate::linalg::{null_space, stack};
use crate::pointwise::C;
use crate::TorusError;

fn needs_n2(fc: &FourierComplex) -> Result<(), TorusError> {
    if fc.n() < 2 {
        return Err(TorusError::NeedsNAtLeast2(fc.n()));
    }
    Ok(())
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub value: f64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntiInvariantReport {
    pub n: usize,
    /// `c` in `∗α⁻ = c α⁻ ∧ ω^{n-2}`, fitted on a basis of constant
    /// anti-invariant 2-forms.
    pub measured_c: f64,
    /// Worst `‖∗α⁻ − c α⁻∧ω^{n-2}‖ / ‖∗α⁻‖` over the basis.
    pub fit_residual: f64,
    pub candidates: Vec<Candidate>,
    /// Number of distinct candidate values matched to `1e-10`.
    pub distinct_matches: usize,
    /// `dim ker d ∩ Ω⁻` summed over modes.
    pub closed_anti_invariant_dim: usize,
    /// Worst `‖Δ_d α‖ / ‖α‖` over closed anti-invariant basis forms.
    pub closed_laplacian_residual: f64,
    pub harmonic_total: usize,
    pub harmonic_invariant: usize,
    pub harmonic_anti_invariant: usize,
}

fn to_form(n: usize, k: usize, v: &CVec) -> Form {
    Form::from_coeffs(n, k, v.iter().copied().collect()).expect("coefficient count matches")
}

/// Star normalization, harmonicity and dimension split of anti-invariant
/// 2-forms.
pub fn anti_invariant_suite(fc: &FourierComplex) -> Result<AntiInvariantReport, TorusError> {
    needs_n2(fc)?;
    let n = fc.n();
    let t = fc.triple();
    let pw = fc.pointwise();
    let ops = pw.degree(2);
    let id = CMat::identity(ops.dim, ops.dim);
    let anti = &id + &ops.j;

    // α⁻ ↦ α⁻ ∧ ω^{n-2}.
    let mut wedge_power = CMat::identity(ops.dim, ops.dim);
    for s in 0..n - 2 {
        wedge_power = fc.l(2 + 2 * s as isize) * wedge_power;
    }
    let top = 2 * n - 2;
    let basis = null_space(&anti, KERNEL_TOL);
    let mut fits = Vec::new();
    let mut fit_residual: f64 = 0.0;
    for col in basis.column_iter() {
        let a = col.into_owned();
        let star = hodge_star(&to_form(n, 2, &a), t)?;
        let star = CVec::from_iterator(star.coeffs().len(), star.coeffs().iter().copied());
        let b = &wedge_power * &a;
        let c = pw.inner(top, &star, &b) / pw.inner(top, &b, &b);
        fit_residual = fit_residual.max(pw.norm_sqr(top, &(&star - &b * c)).sqrt() / pw.norm_sqr(top, &star).sqrt());
        fits.push(c);
    }
    let measured = fits.first().copied().unwrap_or_default();
    let spread = fits.iter().map(|c| (c - measured).norm()).fold(0.0, f64::max);
    fit_residual = fit_residual.max(spread).max(measured.im.abs());
    let measured_c = measured.re;

    let mut candidates = vec![
        Candidate { label: "1/(n-2)!".into(), value: 1.0 / factorial(n - 2), matches: false },
        Candidate { label: "1/(n-1)!".into(), value: 1.0 / factorial(n - 1), matches: false },
    ];
    let mut matched: Vec<f64> = Vec::new();
    for cand in &mut candidates {
        cand.matches = (cand.value - measured_c).abs() < 1e-10 && fit_residual < 1e-10;
        if cand.matches && !matched.contains(&cand.value) {
            matched.push(cand.value);
        }
    }

    let per_mode = fc.map_modes(|xi| {
        let closed = null_space(&stack(&[fc.d(xi, 2), anti.clone()]), KERNEL_TOL);
        let lap = fc.laplacian(xi, 2);
        let worst = closed
            .column_iter()
            .map(|v| {
                let v = v.into_owned();
                pw.norm_sqr(2, &(&lap * &v)).sqrt() / pw.norm_sqr(2, &v).sqrt()
            })
            .fold(0.0, f64::max);
        (closed.ncols(), worst)
    });
    let harmonic = harmonic_space(fc, 2)?;
    Ok(AntiInvariantReport {
        n,
        measured_c,
        fit_residual,
        candidates,
        distinct_matches: matched.len(),
        closed_anti_invariant_dim: per_mode.iter().map(|m| m.0).sum(),
        closed_laplacian_residual: per_mode.iter().map(|m| m.1).fold(0.0, f64::max),
        harmonic_total: harmonic.total_dim,
        harmonic_invariant: harmonic.invariant_dim.unwrap_or(0),
        harmonic_anti_invariant: harmonic.anti_invariant_dim.unwrap_or(0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfDualReport {
    pub n: usize,
    pub samples: usize,
    /// `max ‖dα⁺‖ / ‖α⁺‖`; the constructed forms are closed.
    pub closed_residual: f64,
    /// `max ‖Λα₀‖ / ‖α₀‖`.
    pub primitive_residual: f64,
    /// Range of `‖dα₀‖² / ‖df‖²`.
    pub energy_ratio_min: f64,
    pub energy_ratio_max: f64,
    /// `max |‖df‖² − (n−1)‖dα₀‖²| / (‖df‖² + ‖dα₀‖²)`.
    pub df_relation_residual: f64,
    /// `max ‖d^Λα⁺ − n df‖ / ‖df‖`.
    pub dlambda_residual: f64,
    /// Range of the coefficient `c` in `d^Λ(fω) = c·df` for random `f`.
    pub f_omega_coefficient_min: f64,
    pub f_omega_coefficient_max: f64,
}

impl SelfDualReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.closed_residual < tol && self.df_relation_residual < tol && self.dlambda_residual < tol
    }
}

/// Closed invariant forms built from random combinations of
/// `ker d ∩ Ω⁺` on random nonzero modes.
pub fn self_dual_invariant_relation(fc: &FourierComplex, samples: usize, seed: u64) -> Result<SelfDualReport, TorusError> {
    needs_n2(fc)?;
    let n = fc.n();
    let nf = n as f64;
    let pw = fc.pointwise();
    let ops = pw.degree(2);
    let invariant = CMat::identity(ops.dim, ops.dim) - &ops.j;
    let omega = fc.l(0);
    let lambda = fc.lambda(2);
    let nonzero: Vec<&Vec<i32>> = fc.modes().iter().filter(|m| m.iter().any(|&x| x != 0)).collect();
    if nonzero.is_empty() {
        return Err(TorusError::NoNonzeroModes);
    }

    let rows: Vec<[f64; 6]> = (0..samples as u64)
        .into_par_iter()
        .map(|c| {
            let mut rng = case_rng(seed, "torus-selfdual", c);
            let count = rng.random_range(1..=ACTIVE_MODES);
            let mut alpha = ModeForm { k: 2, terms: Vec::new() };
            let mut f = ModeForm { k: 0, terms: Vec::new() };
            for _ in 0..count {
                let xi = nonzero[rng.random_range(0..nonzero.len())].clone();
                if alpha.terms.iter().any(|(m, _)| *m == xi) {
                    continue;
                }
                let basis = null_space(&stack(&[fc.d(&xi, 2), invariant.clone()]), KERNEL_TOL);
                let a = &basis * random_coeffs(&mut rng, basis.ncols());
                alpha.terms.push((xi.clone(), a));
                f.terms.push((xi, random_coeffs(&mut rng, 1)));
            }
            let fpart = alpha.map_coeffs(0, |v| &lambda * v / C::new(nf, 0.0));
            let alpha0 = alpha.sub(&fpart.map_coeffs(2, |v| &omega * v));
            let d = |x: &ModeForm| fc.apply(x, 1, |xi, k| fc.d(xi, k));
            let nrm = |x: &ModeForm| fc.norm_sqr(x);
            let df = d(&fpart);
            let (ndf, nda0) = (nrm(&df), nrm(&d(&alpha0)));
            let closed = nrm(&d(&alpha)).sqrt() / nrm(&alpha).sqrt();
            let prim = nrm(&alpha0.map_coeffs(0, |v| &lambda * v)).sqrt() / nrm(&alpha0).sqrt();
            let rel = (ndf - (nf - 1.0) * nda0).abs() / (ndf + nda0);
            let dl = fc.apply(&alpha, -1, |xi, k| fc.d_lambda(xi, k));
            let dl_res = nrm(&dl.sub(&df.scale(C::new(nf, 0.0)))).sqrt() / ndf.sqrt();
            // d^Λ(fω) against df for an unrelated random f.
            let f_omega = f.map_coeffs(2, |v| &omega * v);
            let lhs = fc.apply(&f_omega, -1, |xi, k| fc.d_lambda(xi, k));
            let rhs = d(&f);
            let coeff = (fc.inner(&lhs, &rhs) / nrm(&rhs)).re;
            [closed, prim, nda0 / ndf, rel, dl_res, coeff]
        })
        .collect();
    let max = |i: usize| rows.iter().map(|r| r[i]).fold(0.0, f64::max);
    let min = |i: usize| rows.iter().map(|r| r[i]).fold(f64::INFINITY, f64::min);
    Ok(SelfDualReport {
        n,
        samples,
        closed_residual: max(0),
        primitive_residual: max(1),
        energy_ratio_min: min(2),
        energy_ratio_max: max(2),
        df_relation_residual: max(3),
        dlambda_residual: max(4),
        f_omega_coefficient_min: min(5),
        f_omega_coefficient_max: max(5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use llab_core::Triple;

    #[test]
    fn t4_anti_invariant_split() {
        let fc = FourierComplex::new(2, 1, Triple::standard(2).unwrap()).unwrap();
        let r = anti_invariant_suite(&fc).unwrap();
        assert_eq!((r.harmonic_total, r.harmonic_invariant, r.harmonic_anti_invariant), (6, 4, 2));
        assert!((r.measured_c - 1.0).abs() < 1e-12, "{r:?}");
        assert_eq!(r.distinct_matches, 1);
        assert_eq!(r.closed_anti_invariant_dim, 2);
        assert!(r.closed_laplacian_residual < 1e-12);
    }

    #[test]
    fn t4_self_dual_relation() {
        let fc = FourierComplex::new(2, 1, Triple::standard(2).unwrap()).unwrap();
        let r = self_dual_invariant_relation(&fc, 20, 5).unwrap();
        assert!(r.passes(1e-10), "{r:?}");
        assert!((r.energy_ratio_min - 1.0).abs() < 1e-10 && (r.energy_ratio_max - 1.0).abs() < 1e-10);
        assert!((r.f_omega_coefficient_min - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_t2() {
        let fc = FourierComplex::new(1, 1, Triple::standard(1).unwrap()).unwrap();
        assert_eq!(anti_invariant_suite(&fc).unwrap_err(), TorusError::NeedsNAtLeast2(1));
    }
}
