//! Constant-coefficient k-forms on a `2n`-dimensional real vector space,
//! with complex coefficients over the bitmask basis.

use std::ops::{Add, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, One, Zero};

use crate::basis::{self, binomial};
use crate::error::AlgebraError;
use crate::scalar::{Real, Scalar};

/// A degree-`k` form on `R^{2n}`. Coefficients are stored densely in
/// increasing mask order; `coeffs.len() == C(2n, k)` always holds.
#[derive(Clone, Debug, PartialEq)]
pub struct KForm<T> {
    n: usize,
    degree: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> KForm<T> {
    pub fn zero(n: usize, degree: usize) -> Self {
        assert!(degree <= 2 * n, "degree {degree} exceeds 2n = {}", 2 * n);
        Self { n, degree, coeffs: vec![Complex::zero(); binomial(2 * n, degree)] }
    }

    /// The constant function 1.
    pub fn one(n: usize) -> Self {
        Self::basis(n, 0)
    }

    /// The basis element `e^I` for the index set encoded by `mask`.
    pub fn basis(n: usize, mask: u32) -> Self {
        assert!(mask <= basis::full_mask(2 * n), "mask {mask:#b} outside dimension {}", 2 * n);
        let mut f = Self::zero(n, mask.count_ones() as usize);
        f.coeffs[basis::rank(mask)] = Complex::one();
        f
    }

    /// `e^{i}` for a zero-based covector index.
    pub fn covector(n: usize, i: usize) -> Self {
        Self::basis(n, 1 << i)
    }

    pub fn from_coeffs(n: usize, degree: usize, coeffs: Vec<Complex<T>>) -> Result<Self, AlgebraError> {
        if degree > 2 * n {
            return Err(AlgebraError::DegreeOverflow { degree, top: 2 * n });
        }
        if coeffs.len() != binomial(2 * n, degree) {
            return Err(AlgebraError::Malformed(format!(
                "expected {} coefficients for n={n}, k={degree}, got {}",
                binomial(2 * n, degree),
                coeffs.len()
            )));
        }
        Ok(Self { n, degree, coeffs })
    }

    pub fn from_real(n: usize, degree: usize, coeffs: Vec<T>) -> Result<Self, AlgebraError> {
        Self::from_coeffs(n, degree, coeffs.into_iter().map(|c| Complex::new(c, T::zero())).collect())
    }

    /// Builds from sparse `(mask, coefficient)` pairs; repeated masks add up.
    pub fn from_terms(
        n: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (u32, Complex<T>)>,
    ) -> Result<Self, AlgebraError> {
        if degree > 2 * n {
            return Err(AlgebraError::DegreeOverflow { degree, top: 2 * n });
        }
        let mut f = Self::zero(n, degree);
        for (mask, c) in terms {
            if mask.count_ones() as usize != degree || mask > basis::full_mask(2 * n) {
                return Err(AlgebraError::Malformed(format!(
                    "index set {:?} is not a {degree}-subset of 1..={}",
                    basis::mask_to_indices(mask),
                    2 * n
                )));
            }
            f.add_at(mask, c);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Ambient real dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: u32) -> Complex<T> {
        self.coeffs[basis::rank(mask)].clone()
    }

    pub fn set(&mut self, mask: u32, c: Complex<T>) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        self.coeffs[basis::rank(mask)] = c;
    }

    pub(crate) fn add_at(&mut self, mask: u32, c: Complex<T>) {
        let slot = &mut self.coeffs[basis::rank(mask)];
        *slot = slot.clone() + c;
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Complex<T>)> + '_ {
        basis::masks(self.dim(), self.degree).zip(self.coeffs.iter()).filter(|(_, c)| !c.is_zero())
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn scale_real(&self, c: &T) -> Self {
        self.map(|x| Complex::new(x.re.clone() * c.clone(), x.im.clone() * c.clone()))
    }

    pub fn conj(&self) -> Self {
        self.map(Complex::conj)
    }

    pub fn real_part(&self) -> Self {
        self.map(|x| Complex::new(x.re.clone(), T::zero()))
    }

    pub fn imag_part(&self) -> Self {
        self.map(|x| Complex::new(x.im.clone(), T::zero()))
    }

    /// True when every imaginary part is within the scalar tolerance.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= T::tolerance())
    }

    pub fn map(&self, f: impl Fn(&Complex<T>) -> Complex<T>) -> Self {
        Self { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }

    fn same_shape(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.degree != other.degree {
            return Err(AlgebraError::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Complex<T>, &Complex<T>) -> Complex<T>) -> Self {
        Self {
            n: self.n,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Largest `|re| + |im|` over the coefficients; exact for rational types.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| {
            let v = c.re.abs() + c.im.abs();
            if v > m {
                v
            } else {
                m
            }
        })
    }

    /// Euclidean coefficient dot product `Σ a_I conj(b_I)`; equals the
    /// metric inner product only for an orthonormal coframe.
    pub fn coeff_dot(&self, other: &Self) -> Complex<T> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.clone() * b.clone().conj())
    }
}

impl<T: Real> KForm<T> {
    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr()).sqrt()
    }

    pub fn is_negligible(&self, tol: T) -> bool {
        self.coeffs.iter().all(|c| Float::abs(c.re) <= tol && Float::abs(c.im) <= tol)
    }
}

impl<T: Scalar> Add for &KForm<T> {
    type Output = KForm<T>;
    /// Panics on shape mismatch; use [`KForm::checked_add`] for fallible input.
    fn add(self, rhs: Self) -> KForm<T> {
        self.checked_add(rhs).expect("KForm addition")
    }
}

impl<T: Scalar> Sub for &KForm<T> {
    type Output = KForm<T>;
    fn sub(self, rhs: Self) -> KForm<T> {
        self.checked_sub(rhs).expect("KForm subtraction")
    }
}

impl<T: Scalar> Add for KForm<T> {
    type Output = KForm<T>;
    fn add(self, rhs: Self) -> KForm<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for KForm<T> {
    type Output = KForm<T>;
    fn sub(self, rhs: Self) -> KForm<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for &KForm<T> {
    type Output = KForm<T>;
    fn neg(self) -> KForm<T> {
        self.map(|c| -c.clone())
    }
}

impl<T: Scalar> Neg for KForm<T> {
    type Output = KForm<T>;
    fn neg(self) -> KForm<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_count() {
        for n in 1..=4 {
            for k in 0..=2 * n {
                assert_eq!(KForm::<f64>::zero(n, k).coeffs().len(), binomial(2 * n, k));
            }
        }
    }

    #[test]
    fn terms_skip_zeros() {
        let mut f = KForm::<f64>::zero(2, 2);
        f.set(0b0101, Complex::new(2.0, 0.0));
        let t: Vec<_> = f.terms().collect();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].0, 0b0101);
    }

    #[test]
    fn shape_mismatch_is_error() {
        let a = KForm::<f64>::zero(2, 1);
        let b = KForm::<f64>::zero(2, 2);
        assert!(matches!(a.checked_add(&b), Err(AlgebraError::DegreeMismatch { .. })));
        let c = KForm::<f64>::zero(3, 1);
        assert!(matches!(a.checked_sub(&c), Err(AlgebraError::DimensionMismatch { .. })));
    }

    #[test]
    fn from_terms_rejects_bad_masks() {
        assert!(KForm::<f64>::from_terms(1, 1, [(0b11, Complex::new(1.0, 0.0))]).is_err());
        assert!(KForm::<f64>::from_terms(1, 1, [(0b100, Complex::new(1.0, 0.0))]).is_err());
    }
}
