//! Dense linear algebra on `Λ^k`: operator matrices in metric-orthonormal
//! coordinates, primitive subspaces and the conditioning of `L^{n-k}`.

use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex;
use serde::Serialize;

use crate::basis::{binomial, masks};
use crate::error::AlgebraError;
use crate::exterior::inner;
use crate::form::KForm;
use crate::lefschetz::{dual_lefschetz, lefschetz_pow};
use crate::triple::CompatibleTriple;

pub type CMat = DMatrix<Complex<f64>>;

/// Coordinate matrix of `f: Λ^k → Λ^l`.
pub fn operator_matrix(
    n: usize,
    k: usize,
    l: usize,
    f: impl Fn(&KForm<f64>) -> Result<KForm<f64>, AlgebraError>,
) -> Result<CMat, AlgebraError> {
    let cols = binomial(2 * n, k);
    let rows = binomial(2 * n, l);
    let mut m = CMat::zeros(rows, cols);
    for (j, mask) in masks(2 * n, k).enumerate() {
        let img = f(&KForm::basis(n, mask))?;
        if img.degree() != l {
            return Err(AlgebraError::DegreeMismatch { expected: l, found: img.degree() });
        }
        for (i, c) in img.coeffs().iter().enumerate() {
            m[(i, j)] = *c;
        }
    }
    Ok(m)
}

/// Gram matrix `G[i][j] = ⟨e^{J_j}, e^{I_i}⟩` of the coordinate basis of `Λ^k`.
pub fn gram(t: &CompatibleTriple<f64>, k: usize) -> Result<CMat, AlgebraError> {
    let n = t.n();
    let basis: Vec<KForm<f64>> = masks(2 * n, k).map(|m| KForm::basis(n, m)).collect();
    let d = basis.len();
    let mut g = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = inner(&basis[j], &basis[i], t)?;
        }
    }
    Ok(g)
}

/// Factor `U` with `‖x‖² = ‖U x‖²` in the metric norm on `Λ^k`.
pub fn metric_factor(t: &CompatibleTriple<f64>, k: usize) -> Result<CMat, AlgebraError> {
    let g = gram(t, k)?;
    let chol = Cholesky::<Complex<f64>, Dyn>::new(g)
        .ok_or_else(|| AlgebraError::IncompatibleTriple("Gram matrix is not positive definite".into()))?;
    Ok(chol.l().adjoint())
}

/// `U_l A U_k^{-1}`, the operator in metric-orthonormal coordinates.
pub fn orthonormal_operator(t: &CompatibleTriple<f64>, a: &CMat, k: usize, l: usize) -> Result<CMat, AlgebraError> {
    let uk = metric_factor(t, k)?;
    let ul = metric_factor(t, l)?;
    let uk_inv = uk.try_inverse().ok_or_else(|| AlgebraError::IncompatibleTriple("singular metric factor".into()))?;
    Ok(ul * a * uk_inv)
}

fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal (metric coordinates) basis of the primitive `k`-forms,
/// as columns; `ker Λ` for `k ≥ 2`, everything below.
pub fn primitive_basis(t: &CompatibleTriple<f64>, k: usize) -> Result<CMat, AlgebraError> {
    let n = t.n();
    let d = binomial(2 * n, k);
    if k < 2 {
        return Ok(CMat::identity(d, d));
    }
    let lam = operator_matrix(n, k, k - 2, |a| dual_lefschetz(a, t))?;
    let lam = orthonormal_operator(t, &lam, k, k - 2)?;
    // ker Λ = orthogonal complement of the row space.
    let svd = lam.adjoint().svd(true, false);
    let u = svd.u.expect("requested");
    let scale = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > 1e-10 * scale).count();
    let mut basis: Vec<nalgebra::DVector<Complex<f64>>> = (0..rank).map(|i| u.column(i).into_owned()).collect();
    // Complete to an orthonormal basis of C^d by Gram-Schmidt against the
    // range; the new vectors span the kernel.
    let mut kernel = Vec::new();
    for e in 0..d {
        let mut v = nalgebra::DVector::<Complex<f64>>::zeros(d);
        v[e] = Complex::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&v);
                v -= b * c;
            }
        }
        let nv = v.norm();
        if nv > 1e-8 {
            v /= Complex::new(nv, 0.0);
            basis.push(v.clone());
            kernel.push(v);
        }
    }
    Ok(CMat::from_columns(&kernel))
}

/// Conditioning of `L^{n-k}` restricted to primitive `k`-forms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectivityReport {
    pub n: usize,
    pub k: usize,
    pub primitive_dim: usize,
    pub expected_dim: usize,
    pub rank: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub condition: f64,
}

pub fn lefschetz_injectivity(t: &CompatibleTriple<f64>, k: usize) -> Result<InjectivityReport, AlgebraError> {
    let n = t.n();
    if k > n {
        return Err(AlgebraError::AboveMiddleDegree { degree: k, n });
    }
    let p = primitive_basis(t, k)?;
    let l = operator_matrix(n, k, 2 * n - k, |a| lefschetz_pow(a, n - k, t))?;
    let l = orthonormal_operator(t, &l, k, 2 * n - k)?;
    let s = singular_values(&(l * &p));
    let scale = s.first().copied().unwrap_or(0.0).max(1.0);
    let rank = s.iter().filter(|&&x| x > 1e-10 * scale).count();
    let sigma_max = s.first().copied().unwrap_or(0.0);
    let sigma_min = s.last().copied().unwrap_or(0.0);
    Ok(InjectivityReport {
        n,
        k,
        primitive_dim: p.ncols(),
        expected_dim: binomial(2 * n, k) - if k >= 2 { binomial(2 * n, k - 2) } else { 0 },
        rank,
        sigma_min,
        sigma_max,
        condition: if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY },
    })
}

/// Metric operator norm of `L^r` on `Λ^m`; zero when `m + 2r > 2n`.
pub fn lefschetz_operator_norm(t: &CompatibleTriple<f64>, m: usize, r: usize) -> Result<f64, AlgebraError> {
    let n = t.n();
    if m + 2 * r > 2 * n {
        return Ok(0.0);
    }
    let l = operator_matrix(n, m, m + 2 * r, |a| lefschetz_pow(a, r, t))?;
    let l = orthonormal_operator(t, &l, m, m + 2 * r)?;
    Ok(singular_values(&l).first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_dimensions() {
        for n in 1..=4 {
            let t = CompatibleTriple::<f64>::standard(n).unwrap();
            for k in 0..=n {
                let r = lefschetz_injectivity(&t, k).unwrap();
                assert_eq!(r.primitive_dim, r.expected_dim, "n={n} k={k}");
                assert_eq!(r.rank, r.primitive_dim);
                assert!(r.sigma_min > 0.0);
            }
        }
    }

    #[test]
    fn operator_norm_of_l_on_functions() {
        // |ω| = sqrt(n) in the standard metric.
        let t = CompatibleTriple::<f64>::standard(3).unwrap();
        assert!((lefschetz_operator_norm(&t, 0, 1).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(lefschetz_operator_norm(&t, 6, 1).unwrap(), 0.0);
    }

    #[test]
    fn gram_is_identity_for_standard() {
        let t = CompatibleTriple::<f64>::standard(2).unwrap();
        let g = gram(&t, 2).unwrap();
        assert!((g - CMat::identity(6, 6)).norm() < 1e-15);
    }
}
