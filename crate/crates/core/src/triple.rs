//! Compatible triples `(ω, J, g)` on `R^{2n}`.
//!
//! Matrices act on column vectors of the standard basis `e_1..e_{2n}`:
//! `ω(u, v) = uᵀ Ω v`, `J e_b = Σ_a J[a][b] e_a`, and `g = Ω J`, i.e.
//! `g(u, v) = ω(u, Jv)`. Covectors transform by pullback,
//! `J*e^a = Σ_b J[a][b] e^b`.

use std::sync::OnceLock;

use num_complex::Complex;

use crate::dense::{pivoted_rows, Mat, Pivot};
use crate::error::AlgebraError;
use crate::exterior::{compound, Compound};
use crate::form::KForm;
use crate::scalar::{factorial, Scalar};

#[derive(Clone, Debug)]
pub struct CompatibleTriple<T> {
    n: usize,
    omega: Mat<T>,
    j: Mat<T>,
    g: Mat<T>,
    omega_inv: Mat<T>,
    g_inv: Mat<T>,
    /// Coefficient of `ω^n / n!` on `e^{1..2n}`, the Pfaffian of Ω.
    volume: T,
    orthonormal: bool,
    /// Rows `φ_1..φ_n` span the `(1,0)`-covectors, rows `n..2n` their conjugates.
    frame: Mat<Complex<T>>,
    frame_inv: Mat<Complex<T>>,
    /// Induced maps of `g⁻¹` and `(ω⁻¹)ᵀ` on `Λ^k`, filled on first use.
    g_inv_induced: Vec<OnceLock<Compound<T>>>,
    omega_inv_induced: Vec<OnceLock<Compound<T>>>,
}

impl<T: Scalar> CompatibleTriple<T>
where
    T: Pivot,
{
    /// The Darboux triple `ω = Σ e^{2i-1} ∧ e^{2i}`, `J e_{2i-1} = e_{2i}`, `g = I`.
    pub fn standard(n: usize) -> Result<Self, AlgebraError> {
        check_n(n)?;
        let dim = 2 * n;
        let omega = Mat::from_fn(dim, |a, b| {
            if a % 2 == 0 && b == a + 1 {
                T::one()
            } else if b % 2 == 0 && a == b + 1 {
                -T::one()
            } else {
                T::zero()
            }
        });
        let j = Mat::from_fn(dim, |a, b| {
            if a % 2 == 1 && b == a - 1 {
                T::one()
            } else if a % 2 == 0 && b == a + 1 {
                -T::one()
            } else {
                T::zero()
            }
        });
        Self::from_omega_j(omega, j)
    }

    /// Synthesizes `g = ω(·, J·)` and validates positivity; an indefinite
    /// result is rejected.
    pub fn from_omega_j(omega: Mat<T>, j: Mat<T>) -> Result<Self, AlgebraError> {
        let g = omega.mul(&j);
        Self::from_matrices(omega, j, g)
    }

    pub fn from_matrices(omega: Mat<T>, j: Mat<T>, g: Mat<T>) -> Result<Self, AlgebraError> {
        let dim = omega.dim();
        if !dim.is_multiple_of(2) || j.dim() != dim || g.dim() != dim {
            return Err(AlgebraError::IncompatibleTriple(format!(
                "matrix sizes {}, {}, {} must agree and be even",
                dim,
                j.dim(),
                g.dim()
            )));
        }
        let n = dim / 2;
        check_n(n)?;
        let tol = T::tolerance();
        let small = |m: &Mat<T>| m.entries().all(|x| x.abs() <= tol);

        if !small(&omega.add(&omega.transpose())) {
            return Err(AlgebraError::IncompatibleTriple("ω is not antisymmetric".into()));
        }
        let id = Mat::<T>::identity(dim);
        if !small(&j.mul(&j).add(&id)) {
            return Err(AlgebraError::IncompatibleTriple("J² ≠ -I".into()));
        }
        if !small(&j.transpose().mul(&omega).mul(&j).sub(&omega)) {
            return Err(AlgebraError::IncompatibleTriple("ω(J·, J·) ≠ ω".into()));
        }
        if omega.det().abs() <= tol {
            return Err(AlgebraError::IncompatibleTriple("ω is degenerate".into()));
        }
        if !small(&g.sub(&omega.mul(&j))) {
            return Err(AlgebraError::IncompatibleTriple("g ≠ ω(·, J·)".into()));
        }
        if !small(&g.sub(&g.transpose())) {
            return Err(AlgebraError::IncompatibleTriple("g is not symmetric".into()));
        }
        for m in 1..=dim {
            if g.leading(m).det() <= tol {
                return Err(AlgebraError::IncompatibleTriple(format!(
                    "g = ω(·, J·) is not positive definite (leading minor {m})"
                )));
            }
        }

        let omega_inv = omega.inverse().ok_or_else(|| AlgebraError::IncompatibleTriple("ω is degenerate".into()))?;
        let g_inv = g.inverse().ok_or_else(|| AlgebraError::IncompatibleTriple("g is degenerate".into()))?;
        let orthonormal = small(&g.sub(&id));

        let (frame, frame_inv) = complex_frame(&j)?;

        let mut triple = Self {
            n,
            omega,
            j,
            g,
            omega_inv,
            g_inv,
            volume: T::one(),
            orthonormal,
            frame,
            frame_inv,
            g_inv_induced: (0..=dim).map(|_| OnceLock::new()).collect(),
            omega_inv_induced: (0..=dim).map(|_| OnceLock::new()).collect(),
        };
        triple.volume = triple.pfaffian();
        Ok(triple)
    }

    fn pfaffian(&self) -> T {
        let omega = self.omega_form();
        let mut power = KForm::one(self.n);
        for _ in 0..self.n {
            power = crate::exterior::wedge(&omega, &power).expect("degree within range");
        }
        let top = power.coeff(crate::basis::full_mask(2 * self.n)).re;
        top / T::from_uint(factorial(self.n))
    }
}

impl<T: Scalar> CompatibleTriple<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn omega(&self) -> &Mat<T> {
        &self.omega
    }

    pub fn j(&self) -> &Mat<T> {
        &self.j
    }

    pub fn g(&self) -> &Mat<T> {
        &self.g
    }

    /// Inverse of Ω, the bivector `(ω^{-1})^{ij}` used by Λ and `∗_s`.
    pub fn omega_inv(&self) -> &Mat<T> {
        &self.omega_inv
    }

    pub fn g_inv(&self) -> &Mat<T> {
        &self.g_inv
    }

    /// Index raising on `Λ^k`.
    pub(crate) fn g_inv_induced(&self, k: usize) -> &Compound<T> {
        self.g_inv_induced[k].get_or_init(|| compound(&self.g_inv, self.n, k))
    }

    /// Raising with `ω⁻¹` on `Λ^k`, the first half of the symplectic star.
    pub(crate) fn omega_inv_induced(&self, k: usize) -> &Compound<T> {
        self.omega_inv_induced[k].get_or_init(|| compound(&self.omega_inv.transpose(), self.n, k))
    }

    /// Coefficient of the volume form `ω^n/n!` on `e^{1..2n}`.
    pub fn volume(&self) -> &T {
        &self.volume
    }

    /// True when `g` is the identity matrix, which enables permutation fast paths.
    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn frame(&self) -> &Mat<Complex<T>> {
        &self.frame
    }

    pub fn frame_inv(&self) -> &Mat<Complex<T>> {
        &self.frame_inv
    }

    /// `ω` as a 2-form.
    pub fn omega_form(&self) -> KForm<T> {
        let dim = self.dim();
        let mut f = KForm::zero(self.n, 2);
        for a in 0..dim {
            for b in a + 1..dim {
                let w = self.omega[(a, b)].clone();
                if !w.is_zero() {
                    f.set((1 << a) | (1 << b), Complex::new(w, T::zero()));
                }
            }
        }
        f
    }

    /// The volume form `ω^n / n!`.
    pub fn volume_form(&self) -> KForm<T> {
        let mut f = KForm::zero(self.n, 2 * self.n);
        f.set(crate::basis::full_mask(2 * self.n), Complex::new(self.volume.clone(), T::zero()));
        f
    }

    pub(crate) fn check_form(&self, a: &KForm<T>) -> Result<(), AlgebraError> {
        if a.n() != self.n {
            return Err(AlgebraError::DimensionMismatch { expected: self.n, found: a.n() });
        }
        Ok(())
    }

    /// Entrywise compatibility residuals `(‖J²+I‖, ‖JᵀΩJ−Ω‖, ‖g−ΩJ‖)` as max-abs.
    pub fn compatibility_residuals(&self) -> [f64; 3]
    where
        T: Pivot,
    {
        let id = Mat::<T>::identity(self.dim());
        [
            self.j.mul(&self.j).add(&id).max_magnitude(),
            self.j.transpose().mul(&self.omega).mul(&self.j).sub(&self.omega).max_magnitude(),
            self.g.sub(&self.omega.mul(&self.j)).max_magnitude(),
        ]
    }
}

fn check_n(n: usize) -> Result<(), AlgebraError> {
    if n == 0 || n > crate::basis::MAX_DIM / 2 {
        return Err(AlgebraError::InvalidDimension(n));
    }
    Ok(())
}

type Frame<T> = (Mat<Complex<T>>, Mat<Complex<T>>);

/// Picks `n` independent `(1,0)`-covectors `e^a - i J*e^a` and completes them
/// with their conjugates.
fn complex_frame<T: Scalar>(j: &Mat<T>) -> Result<Frame<T>, AlgebraError> {
    let dim = j.dim();
    let candidates: Vec<Vec<Complex<T>>> = (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let re = if a == b { T::one() } else { T::zero() };
                    Complex::new(re, -j[(a, b)].clone())
                })
                .collect()
        })
        .collect();
    let mut chosen = pivoted_rows(&candidates, dim / 2);
    if chosen.len() < dim / 2 {
        return Err(AlgebraError::IncompatibleTriple("J has no complex frame".into()));
    }
    chosen.sort_unstable();
    let holo: Vec<Vec<Complex<T>>> = chosen.iter().map(|&i| candidates[i].clone()).collect();
    let mut rows = holo.clone();
    rows.extend(holo.iter().map(|r| r.iter().map(Complex::conj).collect::<Vec<_>>()));
    let frame = Mat::from_rows(rows).expect("square frame");
    let frame_inv = frame
        .inverse()
        .ok_or_else(|| AlgebraError::IncompatibleTriple("complex frame is degenerate".into()))?;
    Ok((frame, frame_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn standard_n1_matrices() {
        let t = CompatibleTriple::<f64>::standard(1).unwrap();
        assert_eq!(t.omega().rows(), vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert_eq!(t.j().rows(), vec![vec![0.0, -1.0], vec![1.0, 0.0]]);
        assert_eq!(t.g().rows(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(t.is_orthonormal());
    }

    #[test]
    fn standard_n2_compatibility_is_exact() {
        let t = CompatibleTriple::<f64>::standard(2).unwrap();
        assert_eq!(t.compatibility_residuals(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn standard_n3_det_omega_is_one() {
        // Block-diagonal ω: det = Π det[[0,1],[-1,0]] = 1.
        let t = CompatibleTriple::<Ratio<i128>>::standard(3).unwrap();
        assert_eq!(t.omega().det(), Ratio::from_integer(1));
        assert_eq!(*t.volume(), Ratio::from_integer(1));
    }

    #[test]
    fn rejects_n_zero() {
        assert_eq!(CompatibleTriple::<f64>::standard(0).unwrap_err(), AlgebraError::InvalidDimension(0));
    }

    #[test]
    fn rejects_indefinite_metric() {
        // J' = -J is ω-compatible in the algebraic sense but g = ω J' = -I.
        let t = CompatibleTriple::<f64>::standard(1).unwrap();
        let minus_j = t.j().map(|x| -x);
        let err = CompatibleTriple::from_omega_j(t.omega().clone(), minus_j).unwrap_err();
        assert!(matches!(err, AlgebraError::IncompatibleTriple(msg) if msg.contains("positive")));
    }

    #[test]
    fn rejects_non_complex_structure() {
        let t = CompatibleTriple::<f64>::standard(1).unwrap();
        let err = CompatibleTriple::from_omega_j(t.omega().clone(), Mat::identity(2)).unwrap_err();
        assert!(matches!(err, AlgebraError::IncompatibleTriple(_)));
    }

    #[test]
    fn scaled_triple_is_accepted() {
        // ω = 2 e^{12}, J standard -> g = 2 I.
        let std = CompatibleTriple::<f64>::standard(1).unwrap();
        let omega = std.omega().map(|x| 2.0 * x);
        let t = CompatibleTriple::from_omega_j(omega, std.j().clone()).unwrap();
        assert_eq!(t.g().rows(), vec![vec![2.0, 0.0], vec![0.0, 2.0]]);
        assert!(!t.is_orthonormal());
        assert!((t.volume() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn frame_is_dz_for_standard_j() {
        let t = CompatibleTriple::<f64>::standard(2).unwrap();
        // dz^1 = e^1 + i e^2
        assert_eq!(t.frame().row(0)[0], Complex::new(1.0, 0.0));
        assert_eq!(t.frame().row(0)[1], Complex::new(0.0, 1.0));
        assert_eq!(t.frame().row(2)[1], Complex::new(0.0, -1.0));
    }
}
