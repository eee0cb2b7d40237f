//! Deterministic sampling for the randomized identity sweeps.
//!
//! Every case draws from its own generator, seeded from the suite seed and a
//! case label, so results do not depend on scheduling order.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::binomial;
use crate::bigraded::type_range;
use crate::dense::Mat;
use crate::error::AlgebraError;
use crate::exterior::pull_back_complex;
use crate::form::KForm;
use crate::lefschetz::primitive_decompose;
use crate::scalar::Real;
use crate::triple::CompatibleTriple;

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for case `case` of stream `stream` under the suite seed `seed`.
pub fn case_seed(seed: u64, stream: &str, case: u64) -> u64 {
    let label = stream.bytes().fold(0xCBF2_9CE4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01B3));
    mix(mix(seed ^ label).wrapping_add(case))
}

pub fn case_rng(seed: u64, stream: &str, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case_seed(seed, stream, case))
}

fn uniform<T: Real, R: Rng>(rng: &mut R) -> T {
    T::from_f64(rng.random_range(-1.0..1.0)).expect("representable")
}

/// Coefficients uniform in `[-1, 1]`, purely real when `real` is set.
pub fn random_form<T: Real, R: Rng>(rng: &mut R, n: usize, k: usize, real: bool) -> KForm<T> {
    let coeffs = (0..binomial(2 * n, k))
        .map(|_| {
            let re = uniform(rng);
            let im = if real { T::zero() } else { uniform(rng) };
            Complex::new(re, im)
        })
        .collect();
    KForm::from_coeffs(n, k, coeffs).expect("coefficient count matches")
}

/// A random primitive `k`-form, the `r = 0` piece of a random form.
pub fn random_primitive<T: Real, R: Rng>(
    rng: &mut R,
    t: &CompatibleTriple<T>,
    k: usize,
    real: bool,
) -> Result<KForm<T>, AlgebraError> {
    let n = t.n();
    if k > n {
        return Err(AlgebraError::AboveMiddleDegree { degree: k, n });
    }
    let a = random_form(rng, n, k, real);
    Ok(primitive_decompose(&a, t)?.component(0).cloned().expect("level 0 exists for k <= n"))
}

/// A random form of pure type `(p, q)`, built in the complex coframe.
pub fn random_pure<T: Real, R: Rng>(
    rng: &mut R,
    t: &CompatibleTriple<T>,
    p: usize,
    q: usize,
) -> Result<KForm<T>, AlgebraError> {
    let n = t.n();
    let k = p + q;
    if k > 2 * n || !type_range(n, k).contains(&p) {
        return Err(AlgebraError::IndexRange(format!("type ({p},{q}) does not occur for n = {n}")));
    }
    let mut c = KForm::zero(n, k);
    for m in crate::basis::masks(2 * n, k) {
        if (m & ((1 << n) - 1)).count_ones() as usize == p {
            c.set(m, Complex::new(uniform(rng), uniform(rng)));
        }
    }
    pull_back_complex(t.frame(), &c)
}

/// A random compatible triple `(AᵀΩ₀A, A⁻¹J₀A)` obtained by a random linear
/// change of coordinates `A = I + E` with `‖E‖₂` around 0.3 in every
/// dimension. Draws whose metric has condition above 10 are rejected: the
/// Gram matrix on `Λ^k` has condition up to `cond(g)^k`, which sets the
/// roundoff floor of every residual.
pub fn random_triple<T: Real + crate::dense::Pivot, R: Rng>(rng: &mut R, n: usize) -> Result<CompatibleTriple<T>, AlgebraError> {
    let std = CompatibleTriple::<T>::standard(n)?;
    let dim = 2 * n;
    let scale = T::from_f64(0.25 / (dim as f64).sqrt()).expect("representable");
    loop {
        let noise: Vec<T> = (0..dim * dim).map(|_| uniform(rng)).collect();
        let a = Mat::from_fn(dim, |i, j| {
            let e = noise[i * dim + j] * scale;
            if i == j {
                T::one() + e
            } else {
                e
            }
        });
        let Some(a_inv) = a.inverse() else { continue };
        let omega = a.transpose().mul(std.omega()).mul(&a);
        let j = a_inv.mul(std.j()).mul(&a);
        // Roundoff can trip the compatibility checks on an unlucky draw.
        let Ok(t) = CompatibleTriple::from_omega_j(omega, j) else { continue };
        if t.g().max_magnitude() * t.g_inv().max_magnitude() < 10.0 {
            return Ok(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraded::pure_type;
    use crate::lefschetz::is_primitive;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(case_seed(7, "weil", 3), case_seed(7, "weil", 3));
        assert_ne!(case_seed(7, "weil", 3), case_seed(7, "weil", 4));
        assert_ne!(case_seed(7, "weil", 3), case_seed(7, "star", 3));
        assert_ne!(case_seed(7, "weil", 3), case_seed(8, "weil", 3));
    }

    #[test]
    fn samples_have_requested_structure() {
        let mut rng = case_rng(1, "t", 0);
        let t = CompatibleTriple::<f64>::standard(3).unwrap();
        let b = random_primitive(&mut rng, &t, 2, true).unwrap();
        assert!(is_primitive(&b, &t, 1e-12).unwrap().primitive);
        assert!(b.is_real());
        let a = random_pure(&mut rng, &t, 2, 1).unwrap();
        assert_eq!(pure_type(&a, &t).unwrap(), Some((2, 1)));
    }

    #[test]
    fn random_triples_validate() {
        let mut rng = case_rng(2, "triple", 0);
        for n in 1..=3 {
            let t = random_triple::<f64, _>(&mut rng, n).unwrap();
            assert!(!t.is_orthonormal());
            assert!(t.compatibility_residuals().iter().all(|&r| r < 1e-12));
        }
    }
}
