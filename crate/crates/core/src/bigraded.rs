//! Type decomposition `Λ^k ⊗ C = ⊕ Λ^{p,q}` induced by J, and the Weil operator.
//!
//! Forms are rewritten in the complex coframe `(φ^1..φ^n, φ̄^1..φ̄^n)` stored
//! on the triple; a frame monomial with `p` holomorphic and `q`
//! antiholomorphic factors has type `(p, q)`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::One;

use crate::error::AlgebraError;
use crate::exterior::pull_back_complex;
use crate::form::KForm;
use crate::scalar::Scalar;
use crate::triple::CompatibleTriple;

/// Components `Π^{p,q} a` keyed by `(p, q)`, for every type with `p + q = k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BigradedForm<T> {
    n: usize,
    k: usize,
    components: BTreeMap<(usize, usize), KForm<T>>,
}

impl<T: Scalar> BigradedForm<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// `Π^{p,q} a`; zero for types that cannot occur.
    pub fn component(&self, p: usize, q: usize) -> KForm<T> {
        self.components.get(&(p, q)).cloned().unwrap_or_else(|| KForm::zero(self.n, self.k))
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), KForm<T>> {
        &self.components
    }

    /// Types whose component is not exactly zero.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.components.iter().filter(|(_, f)| !f.is_zero()).map(|(&pq, _)| pq).collect()
    }

    pub fn reconstruct(&self) -> KForm<T> {
        self.components.values().fold(KForm::zero(self.n, self.k), |acc, f| &acc + f)
    }
}

/// Admissible `p` for degree `k`: `max(0, k - n) ..= min(k, n)`.
pub fn type_range(n: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    k.saturating_sub(n)..=k.min(n)
}

fn frame_coords<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(a)?;
    pull_back_complex(t.frame_inv(), a)
}

fn from_frame<T: Scalar>(c: &KForm<T>, t: &CompatibleTriple<T>) -> KForm<T> {
    pull_back_complex(t.frame(), c).expect("frame matches dimension")
}

fn holomorphic_count(mask: u32, n: usize) -> usize {
    (mask & ((1u32 << n) - 1)).count_ones() as usize
}

/// Splits `a` into its `(p, q)` components.
pub fn pq_decompose<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<BigradedForm<T>, AlgebraError> {
    let n = t.n();
    let k = a.degree();
    let c = frame_coords(a, t)?;
    let mut components = BTreeMap::new();
    for p in type_range(n, k) {
        let mut part = KForm::zero(n, k);
        for (m, v) in c.terms() {
            if holomorphic_count(m, n) == p {
                part.set(m, v.clone());
            }
        }
        components.insert((p, k - p), from_frame(&part, t));
    }
    Ok(BigradedForm { n, k, components })
}

/// `Π^{p,q} a` alone.
pub fn pq_project<T: Scalar>(a: &KForm<T>, p: usize, q: usize, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    if p + q != a.degree() {
        return Err(AlgebraError::DegreeMismatch { expected: a.degree(), found: p + q });
    }
    let c = frame_coords(a, t)?;
    let mut part = KForm::zero(t.n(), a.degree());
    for (m, v) in c.terms() {
        if holomorphic_count(m, t.n()) == p {
            part.set(m, v.clone());
        }
    }
    Ok(from_frame(&part, t))
}

/// `i^m` for an integer exponent.
pub fn i_pow<T: Scalar>(m: i64) -> Complex<T> {
    match m.rem_euclid(4) {
        0 => Complex::one(),
        1 => Complex::new(T::zero(), T::one()),
        2 => -Complex::<T>::one(),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// `𝒥a = Σ i^{p-q} Π^{p,q} a`.
pub fn weil_operator<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    let n = t.n();
    let k = a.degree() as i64;
    let c = frame_coords(a, t)?;
    let mut out = KForm::zero(n, a.degree());
    for (m, v) in c.terms() {
        let p = holomorphic_count(m, n) as i64;
        out.set(m, v.clone() * i_pow::<T>(2 * p - k));
    }
    Ok(from_frame(&out, t))
}

/// Inverse of [`weil_operator`], `Σ i^{q-p} Π^{p,q}`.
pub fn weil_operator_inv<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    let n = t.n();
    let k = a.degree() as i64;
    let c = frame_coords(a, t)?;
    let mut out = KForm::zero(n, a.degree());
    for (m, v) in c.terms() {
        let p = holomorphic_count(m, n) as i64;
        out.set(m, v.clone() * i_pow::<T>(k - 2 * p));
    }
    Ok(from_frame(&out, t))
}

/// The pure type `(p, q)` of `a` if exactly one component is nonzero.
pub fn pure_type<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<Option<(usize, usize)>, AlgebraError> {
    let c = frame_coords(a, t)?;
    let mut found = None;
    for (m, v) in c.terms() {
        if v.re.abs() <= T::tolerance() && v.im.abs() <= T::tolerance() {
            continue;
        }
        let p = holomorphic_count(m, t.n());
        match found {
            None => found = Some(p),
            Some(q) if q != p => return Ok(None),
            _ => {}
        }
    }
    Ok(found.map(|p| (p, a.degree() - p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i128>;

    #[test]
    fn omega_is_pure_11() {
        let t = CompatibleTriple::<Q>::standard(2).unwrap();
        let bf = pq_decompose(&t.omega_form(), &t).unwrap();
        assert_eq!(bf.support(), vec![(1, 1)]);
        assert_eq!(bf.component(1, 1), t.omega_form());
    }

    #[test]
    fn re_dz1_dz2_is_20_plus_02() {
        // Re(dz^1 ∧ dz^2) = e^{13} - e^{24}.
        let t = CompatibleTriple::<Q>::standard(2).unwrap();
        let one = Complex::new(Q::from_integer(1), Q::from_integer(0));
        let a = KForm::from_terms(2, 2, [(0b0101, one), (0b1010, -one)]).unwrap();
        let bf = pq_decompose(&a, &t).unwrap();
        assert_eq!(bf.support(), vec![(0, 2), (2, 0)]);
        assert_eq!(bf.reconstruct(), a);
        assert_eq!(bf.component(0, 2), bf.component(2, 0).conj());
        assert_eq!(weil_operator(&a, &t).unwrap(), -a);
    }

    #[test]
    fn weil_on_e1() {
        let t = CompatibleTriple::<Q>::standard(1).unwrap();
        let e1 = KForm::covector(1, 0);
        assert_eq!(weil_operator(&e1, &t).unwrap(), -KForm::covector(1, 1));
        assert_eq!(weil_operator_inv(&weil_operator(&e1, &t).unwrap(), &t).unwrap(), e1);
    }

    #[test]
    fn pure_types() {
        let t = CompatibleTriple::<f64>::standard(1).unwrap();
        // dz = e^1 + i e^2 is (1,0)
        let dz = KForm::from_coeffs(1, 1, vec![Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)]).unwrap();
        assert_eq!(pure_type(&dz, &t).unwrap(), Some((1, 0)));
        assert_eq!(pure_type(&dz.conj(), &t).unwrap(), Some((0, 1)));
        assert_eq!(pure_type(&KForm::covector(1, 0), &t).unwrap(), None);
    }
}
