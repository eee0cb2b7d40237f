//! The explicit spectral-gap constant for a `d(bounded)` Kähler form.
//!
//! For `α` of degree `k < n` the estimate runs through three constants, all
//! computed in the standard flat model:
//!
//! * `A_k = ‖L^{n−k−1}‖` on `Λ^k` bounds the `θ ∧ ω^{n−k−1} ∧ α` term,
//! * `A_{k+1} = ‖L^{n−k−1}‖` on `Λ^{k+1}` bounds the `dα` term,
//! * `|C| = 1/(n−k)!` is the modulus of the Weil constant turning
//!   `α ∧ ω^{n−k}` into `∗α` on primitive forms.
//!
//! Cauchy–Schwarz on both terms gives `‖α‖² ≤ |C|(A_k + A_{k+1}) ‖θ‖∞ ‖α‖
//! ‖Dα‖`, hence `λ ≥ c_{n,k} ‖θ‖∞⁻²` with `c_{n,k} = (|C|(A_k + A_{k+1}))⁻²`.
//! Degrees `k > n` reduce to `2n − k` by Hodge duality. At `n = 1, k = 0`
//! this gives `1/4`.

use llab_core::analysis::lefschetz_operator_norm;
use llab_core::Triple;
use serde::{Deserialize, Serialize};

use crate::HyperbolicError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub symbol: String,
    pub formula: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapBound {
    pub n: usize,
    pub k: usize,
    /// Degree after duality, always `< n`.
    pub reduced_k: usize,
    pub theta_sup: f64,
    pub steps: Vec<DerivationStep>,
    pub constant: f64,
    /// `constant · theta_sup⁻²`.
    pub value: f64,
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

impl GapBound {
    fn step(&self, symbol: &str) -> Option<f64> {
        self.steps.iter().find(|s| s.symbol == symbol).map(|s| s.value)
    }

    /// Recomputes the constant from the recorded steps and from scratch;
    /// returns the larger relative discrepancy.
    pub fn verify(&self) -> Result<f64, HyperbolicError> {
        let missing = || HyperbolicError::InvalidParameters("derivation step missing".into());
        let (a0, a1, c) = (self.step("A_k").ok_or_else(missing)?, self.step("A_k+1").ok_or_else(missing)?, self.step("|C|").ok_or_else(missing)?);
        let from_steps = (c * (a0 + a1)).powi(-2);
        let fresh = gromov_bound(self.n, self.k, self.theta_sup)?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        Ok(rel(from_steps, self.constant).max(rel(fresh.value, self.value)).max(rel(self.constant * self.theta_sup.powi(-2), self.value)))
    }
}

/// `c_{n,k} · theta_sup⁻²` with its derivation.
pub fn gromov_bound(n: usize, k: usize, theta_sup: f64) -> Result<GapBound, HyperbolicError> {
    if n == 0 || k > 2 * n || !(theta_sup > 0.0 && theta_sup.is_finite()) {
        return Err(HyperbolicError::InvalidParameters(format!("n = {n}, k = {k}, theta_sup = {theta_sup}")));
    }
    if k == n {
        return Err(HyperbolicError::MiddleDegree(n));
    }
    let kk = if k > n { 2 * n - k } else { k };
    let t = Triple::standard(n)?;
    let r = n - kk - 1;
    let a0 = lefschetz_operator_norm(&t, kk, r)?;
    let a1 = lefschetz_operator_norm(&t, kk + 1, r)?;
    let c = 1.0 / factorial(n - kk);
    let constant = (c * (a0 + a1)).powi(-2);
    let steps = vec![
        DerivationStep { symbol: "A_k".into(), formula: format!("||L^{r}|| on degree {kk}"), value: a0 },
        DerivationStep { symbol: "A_k+1".into(), formula: format!("||L^{r}|| on degree {}", kk + 1), value: a1 },
        DerivationStep { symbol: "|C|".into(), formula: format!("1/({}-{})!", n, kk), value: c },
        DerivationStep { symbol: "c_nk".into(), formula: "(|C| (A_k + A_k+1))^-2".into(), value: constant },
    ];
    Ok(GapBound { n, k, reduced_k: kk, theta_sup, steps, constant, value: constant / (theta_sup * theta_sup) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_constant_is_a_quarter() {
        let b = gromov_bound(1, 0, 1.0).unwrap();
        assert!((b.value - 0.25).abs() < 1e-14);
        assert!(b.verify().unwrap() < 1e-14);
        assert_eq!(gromov_bound(1, 2, 1.0).unwrap().value, b.value);
        assert_eq!(gromov_bound(1, 1, 1.0).unwrap_err(), HyperbolicError::MiddleDegree(1));
    }

    #[test]
    fn higher_dimensions_verify() {
        for n in 2..=3 {
            for k in (0..=2 * n).filter(|&k| k != n) {
                let b = gromov_bound(n, k, 0.7).unwrap();
                assert!(b.value > 0.0 && b.verify().unwrap() < 1e-12, "n={n} k={k}");
            }
        }
    }
}
