//! Shift-invert Lanczos for the smallest eigenvalues of `A x = λ M x`.
//!
//! The iteration runs on `Op = A⁻¹M`, which is self-adjoint in the
//! `M`-inner product, with full reorthogonalization (two passes). Ritz pairs
//! `θ` of `Op` give `λ = 1/θ`; every accepted pair is certified by the
//! relative residual `‖Ax − λMx‖ / ‖Mx‖`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::sparse::dot;
use crate::HyperbolicError;

/// The pieces of a generalized eigenproblem the iteration needs.
pub trait ShiftInvert {
    fn dim(&self) -> usize;
    /// `A⁻¹ y`.
    fn solve(&self, y: &[f64]) -> Vec<f64>;
    fn apply_a(&self, x: &[f64]) -> Vec<f64>;
    fn apply_m(&self, x: &[f64]) -> Vec<f64>;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanczosOptions {
    pub max_iterations: usize,
    /// Ritz convergence: `|β_m s_{m,i}| < tol · θ_i`.
    pub tol: f64,
    /// Certificate: accepted pairs need residual `< certify · λ`.
    pub certify: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { max_iterations: 80, tol: 1e-12, certify: 1e-8, seed: 0x11ab }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// `‖Ax − λMx‖ / ‖Mx‖`.
    pub residual: f64,
    pub vector: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LanczosOutcome {
    pub pairs: Vec<EigenPair>,
    pub iterations: usize,
}

fn m_norm(op: &impl ShiftInvert, x: &[f64]) -> f64 {
    dot(x, &op.apply_m(x)).sqrt()
}

/// Residual of a candidate pair, scale free in `x`.
pub fn residual(op: &impl ShiftInvert, lambda: f64, x: &[f64]) -> f64 {
    let ax = op.apply_a(x);
    let mx = op.apply_m(x);
    let r: f64 = ax.iter().zip(&mx).map(|(a, m)| (a - lambda * m).powi(2)).sum::<f64>().sqrt();
    r / dot(&mx, &mx).sqrt()
}

/// Computes the `count` smallest eigenpairs.
pub fn smallest_eigenpairs(op: &impl ShiftInvert, count: usize, opts: &LanczosOptions) -> Result<LanczosOutcome, HyperbolicError> {
    let n = op.dim();
    if n == 0 || count == 0 || count > n {
        return Err(HyperbolicError::InvalidParameters(format!("{count} eigenpairs of a {n}-dimensional problem")));
    }
    let mut rng = llab_core::random::case_rng(opts.seed, "lanczos-start", n as u64);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s = m_norm(op, &v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut basis: Vec<Vec<f64>> = vec![v];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let cap = opts.max_iterations.min(n).max(1);

    for m in 1..=cap {
        let last = basis.last().expect("nonempty basis");
        let mv = op.apply_m(last);
        let mut w = op.solve(&mv);
        alpha.push(dot(&w, &mv));
        for _ in 0..2 {
            let mw = op.apply_m(&w);
            for q in &basis {
                let c = dot(q, &mw);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = m_norm(op, &w);

        let t = DMatrix::from_fn(m, m, |i, j| match i.abs_diff(j) {
            0 => alpha[i],
            1 => beta[i.min(j)],
            _ => 0.0,
        });
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let wanted = &order[..count.min(m)];
        let converged = wanted.len() == count
            && wanted.iter().all(|&i| (b * eig.eigenvectors[(m - 1, i)]).abs() < opts.tol * eig.eigenvalues[i].abs());
        let exhausted = b <= 1e-300 || m == cap;
        if converged || exhausted {
            let pairs: Vec<EigenPair> = wanted
                .iter()
                .map(|&i| {
                    let mut x = vec![0.0; n];
                    for (j, q) in basis.iter().enumerate() {
                        let c = eig.eigenvectors[(j, i)];
                        x.iter_mut().zip(q).for_each(|(a, b)| *a += c * b);
                    }
                    let value = 1.0 / eig.eigenvalues[i];
                    EigenPair { value, residual: residual(op, value, &x), vector: x }
                })
                .collect();
            let certified = pairs.iter().all(|p| p.value > 0.0 && p.residual < opts.certify * p.value);
            if pairs.len() == count && certified {
                return Ok(LanczosOutcome { pairs, iterations: m });
            }
            if exhausted {
                let (best, residual) = pairs.first().map_or((f64::NAN, f64::INFINITY), |p| (p.value, p.residual));
                return Err(HyperbolicError::NotConverged { best, residual, iterations: m });
            }
        }
        beta.push(b);
        basis.push(w.into_iter().map(|x| x / b).collect());
    }
    unreachable!("the last iteration always returns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::{Factor, SparseSymmetricMatrix};

    struct Dense {
        a: SparseSymmetricMatrix,
        m: SparseSymmetricMatrix,
        f: Factor,
    }

    impl ShiftInvert for Dense {
        fn dim(&self) -> usize {
            self.a.nrows
        }
        fn solve(&self, y: &[f64]) -> Vec<f64> {
            self.f.solve(y)
        }
        fn apply_a(&self, x: &[f64]) -> Vec<f64> {
            self.a.matvec(x)
        }
        fn apply_m(&self, x: &[f64]) -> Vec<f64> {
            self.m.matvec(x)
        }
    }

    #[test]
    fn finite_difference_eigenvalues() {
        // −u'' on (0, π) with spacing π/(n+1): λ_k = (4/h²) sin²(kh/2).
        let n = 400;
        let h = std::f64::consts::PI / (n + 1) as f64;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 / (h * h)));
            if i + 1 < n {
                t.push((i, i + 1, -1.0 / (h * h)));
                t.push((i + 1, i, -1.0 / (h * h)));
            }
        }
        let a = SparseSymmetricMatrix::from_triplets(n, n, t);
        let m = SparseSymmetricMatrix::diagonal(&vec![1.0; n]);
        let op = Dense { f: Factor::cholesky(&a).unwrap(), a, m };
        let out = smallest_eigenpairs(&op, 3, &LanczosOptions::default()).unwrap();
        for (k, p) in out.pairs.iter().enumerate() {
            let exact = 4.0 / (h * h) * ((k + 1) as f64 * h / 2.0).sin().powi(2);
            assert!((p.value - exact).abs() < 1e-10 * exact, "{} vs {exact}", p.value);
            assert!(p.residual < 1e-8 * p.value);
        }
    }

    #[test]
    fn iteration_cap_reports_best_estimate() {
        let n = 200;
        let d: Vec<f64> = (1..=n).map(|i| 1.0 + 1e-6 * i as f64).collect();
        let a = SparseSymmetricMatrix::diagonal(&d);
        let m = SparseSymmetricMatrix::diagonal(&vec![1.0; n]);
        let op = Dense { f: Factor::cholesky(&a).unwrap(), a, m };
        let opts = LanczosOptions { max_iterations: 3, ..Default::default() };
        match smallest_eigenpairs(&op, 1, &opts) {
            Err(HyperbolicError::NotConverged { best, iterations, .. }) => {
                assert_eq!(iterations, 3);
                assert!((best - 1.0).abs() < 1e-3);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }
}
