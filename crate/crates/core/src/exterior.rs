//! Pointwise exterior algebra: wedge, contraction, induced linear maps, the
//! metric Hodge star and inner product, and the J action on forms.

use num_complex::Complex;
use num_traits::Zero;

use crate::basis::{self, binomial, contraction_sign, full_mask, wedge_sign};
use crate::dense::Mat;
use crate::error::AlgebraError;
use crate::form::KForm;
use crate::scalar::{Real, Scalar};
use crate::triple::CompatibleTriple;

fn same_n<T: Scalar>(a: &KForm<T>, b: &KForm<T>) -> Result<(), AlgebraError> {
    if a.n() != b.n() {
        return Err(AlgebraError::DimensionMismatch { expected: a.n(), found: b.n() });
    }
    Ok(())
}

/// `a ∧ b`. Errors when the dimensions differ or the degree would exceed `2n`.
pub fn wedge<T: Scalar>(a: &KForm<T>, b: &KForm<T>) -> Result<KForm<T>, AlgebraError> {
    same_n(a, b)?;
    let degree = a.degree() + b.degree();
    if degree > a.dim() {
        return Err(AlgebraError::DegreeOverflow { degree, top: a.dim() });
    }
    let mut out = KForm::zero(a.n(), degree);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            match wedge_sign(ma, mb) {
                0 => {}
                s => {
                    let c = ca.clone() * cb.clone();
                    out.add_at(ma | mb, if s > 0 { c } else { -c });
                }
            }
        }
    }
    Ok(out)
}

/// Interior product `ι_{∂_i} a` with the `i`-th (zero-based) basis vector.
pub fn interior<T: Scalar>(i: usize, a: &KForm<T>) -> Result<KForm<T>, AlgebraError> {
    if a.degree() == 0 {
        return Err(AlgebraError::DegreeUnderflow { degree: 0, required: 1 });
    }
    if i >= a.dim() {
        return Err(AlgebraError::IndexRange(format!("vector index {i} in dimension {}", a.dim())));
    }
    let bit = 1u32 << i;
    let mut out = KForm::zero(a.n(), a.degree() - 1);
    for (m, c) in a.terms() {
        if m & bit != 0 {
            let c = c.clone();
            out.add_at(m ^ bit, if contraction_sign(i as u32, m) > 0 { c } else { -c });
        }
    }
    Ok(out)
}

/// Interior product with a general vector `v = Σ v_i ∂_i`.
pub fn interior_vector<T: Scalar>(v: &[Complex<T>], a: &KForm<T>) -> Result<KForm<T>, AlgebraError> {
    if v.len() != a.dim() {
        return Err(AlgebraError::IndexRange(format!("vector of length {} in dimension {}", v.len(), a.dim())));
    }
    let mut out = KForm::zero(a.n(), a.degree().checked_sub(1).ok_or(AlgebraError::DegreeUnderflow {
        degree: 0,
        required: 1,
    })?);
    for (i, vi) in v.iter().enumerate() {
        if !vi.is_zero() {
            out = &out + &interior(i, a)?.scale(vi);
        }
    }
    Ok(out)
}

/// Sparse rows `e^a ↦ Σ_b m[a][b] e^b`.
type Rows<T> = Vec<Vec<(usize, Complex<T>)>>;

/// Memoized images of basis monomials, indexed by source mask.
type Images<T> = Vec<Option<Vec<(u32, Complex<T>)>>>;

/// Images of basis monomials are built by wedging one row onto the image of
/// the monomial's prefix (its factors minus the highest one); prefixes are
/// shared across terms, so each is computed once.
fn expand<T: Scalar>(rows: &Rows<T>, a: &KForm<T>) -> KForm<T> {
    let size = 1usize << a.dim();
    let mut images: Images<T> = vec![None; size];
    images[0] = Some(vec![(0, Complex::new(T::one(), T::zero()))]);
    let mut scratch: Vec<Option<Complex<T>>> = vec![None; size];
    let mut out = KForm::zero(a.n(), a.degree());
    for (mask, c) in a.terms() {
        image(rows, mask, &mut images, &mut scratch);
        for (target, w) in images[mask as usize].as_ref().expect("filled above") {
            out.add_at(*target, w.clone() * c.clone());
        }
    }
    out
}

fn image<T: Scalar>(
    rows: &Rows<T>,
    mask: u32,
    images: &mut Images<T>,
    scratch: &mut [Option<Complex<T>>],
) {
    if images[mask as usize].is_some() {
        return;
    }
    let top = 31 - mask.leading_zeros();
    let prefix = mask ^ (1 << top);
    image(rows, prefix, images, scratch);
    let mut touched = Vec::new();
    for (j, c) in images[prefix as usize].as_ref().expect("filled above") {
        for (b, w) in &rows[top as usize] {
            let bit = 1u32 << b;
            if j & bit != 0 {
                continue;
            }
            let v = c.clone() * w.clone();
            let v = if wedge_sign(*j, bit) > 0 { v } else { -v };
            let slot = &mut scratch[(j | bit) as usize];
            *slot = Some(match slot.take() {
                Some(acc) => acc + v,
                None => {
                    touched.push(j | bit);
                    v
                }
            });
        }
    }
    touched.sort_unstable();
    let list = touched.into_iter().filter_map(|m| scratch[m as usize].take().map(|c| (m, c))).collect();
    images[mask as usize] = Some(list);
}

/// Columns of the induced map of a covector substitution on `Λ^k`: column
/// `i` lists `(rank, coefficient)` of the image of the `i`-th basis element.
pub type Compound<T> = Vec<Vec<(usize, Complex<T>)>>;

pub(crate) fn compound<T: Scalar>(m: &Mat<T>, n: usize, k: usize) -> Compound<T> {
    let rows = real_rows(m);
    let size = 1usize << (2 * n);
    let mut images: Images<T> = vec![None; size];
    images[0] = Some(vec![(0, Complex::new(T::one(), T::zero()))]);
    let mut scratch: Vec<Option<Complex<T>>> = vec![None; size];
    basis::masks(2 * n, k)
        .map(|mask| {
            image(&rows, mask, &mut images, &mut scratch);
            images[mask as usize]
                .as_ref()
                .expect("filled above")
                .iter()
                .map(|(target, w)| (basis::rank(*target), w.clone()))
                .collect()
        })
        .collect()
}

/// Applies an induced map to a form of matching degree.
pub(crate) fn apply_compound<T: Scalar>(c: &Compound<T>, a: &KForm<T>) -> KForm<T> {
    let mut coeffs = vec![Complex::<T>::zero(); a.coeffs().len()];
    for (col, x) in c.iter().zip(a.coeffs()) {
        if x.is_zero() {
            continue;
        }
        for (r, w) in col {
            coeffs[*r] = coeffs[*r].clone() + w.clone() * x.clone();
        }
    }
    KForm::from_coeffs(a.n(), a.degree(), coeffs).expect("same shape as input")
}

fn real_rows<T: Scalar>(m: &Mat<T>) -> Rows<T> {
    (0..m.dim())
        .map(|r| {
            m.row(r)
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(b, x)| (b, Complex::new(x.clone(), T::zero())))
                .collect()
        })
        .collect()
}

/// Extends the covector substitution `e^a ↦ Σ_b m[a][b] e^b` multiplicatively
/// to all degrees.
pub fn pull_back<T: Scalar>(m: &Mat<T>, a: &KForm<T>) -> Result<KForm<T>, AlgebraError> {
    check_matrix(m.dim(), a)?;
    Ok(expand(&real_rows(m), a))
}

/// [`pull_back`] for a complex substitution matrix.
pub fn pull_back_complex<T: Scalar>(m: &Mat<Complex<T>>, a: &KForm<T>) -> Result<KForm<T>, AlgebraError> {
    check_matrix(m.dim(), a)?;
    let rows: Rows<T> = (0..m.dim())
        .map(|r| m.row(r).iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    Ok(expand(&rows, a))
}

fn check_matrix<T: Scalar>(dim: usize, a: &KForm<T>) -> Result<(), AlgebraError> {
    if dim != a.dim() {
        return Err(AlgebraError::IndexRange(format!("{dim}x{dim} matrix on forms of dimension {}", a.dim())));
    }
    Ok(())
}

/// `(Jα)(u_1..u_k) = α(Ju_1..Ju_k)`.
pub fn j_action<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(a)?;
    pull_back(t.j(), a)
}

/// Index raising `β ↦ G_k^{-1} β` by the induced inverse metric on `Λ^k`.
pub fn raise<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    t.check_form(a)?;
    if t.is_orthonormal() {
        return Ok(a.clone());
    }
    Ok(apply_compound(t.g_inv_induced(a.degree()), a))
}

/// Places `vol · c_I · sign(I, I^c)` on `e^{I^c}` for every coefficient of `raised`.
pub(crate) fn complement<T: Scalar>(raised: &KForm<T>, vol: &T) -> KForm<T> {
    let full = full_mask(raised.dim());
    let mut out = KForm::zero(raised.n(), raised.dim() - raised.degree());
    for (m, c) in raised.terms() {
        let c = Complex::new(c.re.clone() * vol.clone(), c.im.clone() * vol.clone());
        out.set(m ^ full, if wedge_sign(m, m ^ full) > 0 { c } else { -c });
    }
    out
}

/// Complex-linear Hodge star: `α ∧ ∗β̄ = ⟨α, β⟩ ω^n/n!`.
pub fn hodge_star<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<KForm<T>, AlgebraError> {
    Ok(complement(&raise(a, t)?, t.volume()))
}

/// Hermitian inner product `⟨a, b⟩ = Σ (G^{-1}a)_I conj(b_I)`, linear in `a`.
pub fn inner<T: Scalar>(a: &KForm<T>, b: &KForm<T>, t: &CompatibleTriple<T>) -> Result<Complex<T>, AlgebraError> {
    same_n(a, b)?;
    if a.degree() != b.degree() {
        return Err(AlgebraError::DegreeMismatch { expected: a.degree(), found: b.degree() });
    }
    Ok(raise(a, t)?.coeff_dot(b))
}

pub fn norm_sqr<T: Scalar>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<T, AlgebraError> {
    Ok(inner(a, a, t)?.re)
}

pub fn norm<T: Real>(a: &KForm<T>, t: &CompatibleTriple<T>) -> Result<T, AlgebraError> {
    Ok(norm_sqr(a, t)?.max(T::zero()).sqrt())
}

/// Dense matrix of a linear map `Λ^k → Λ^l` in the coordinate basis; column
/// `j` holds the image of the `j`-th basis element.
pub fn operator_matrix<T: Scalar>(
    n: usize,
    k: usize,
    f: impl Fn(&KForm<T>) -> Result<KForm<T>, AlgebraError>,
) -> Result<(usize, Vec<Vec<Complex<T>>>), AlgebraError> {
    let cols: Vec<Vec<Complex<T>>> = basis::masks(2 * n, k)
        .map(|m| f(&KForm::basis(n, m)).map(|img| img.coeffs().to_vec()))
        .collect::<Result<_, _>>()?;
    let rows = cols.first().map_or(0, Vec::len);
    debug_assert_eq!(cols.len(), binomial(2 * n, k));
    Ok((rows, cols))
}
