//! Operator identities checked against independently built oracles.

use llab_core::analysis::{gram, operator_matrix, CMat};
use llab_core::basis::{binomial, full_mask, masks, wedge_sign};
use llab_core::bigraded::{pq_project, pure_type, type_range, weil_operator_inv};
use llab_core::dense::Mat;
use llab_core::exterior::{pull_back, raise};
use llab_core::lefschetz::{
    commutator_difference, dual_lefschetz_via_star, dual_lefschetz_via_symplectic_star, lefschetz_pow,
    level_range, weil_relation_difference,
};
use llab_core::random::{case_rng, random_form, random_primitive, random_pure, random_triple};
use llab_core::*;
use num_complex::Complex;
use num_traits::Zero;
use proptest::prelude::*;

type C = Complex<f64>;

fn diff_norm(a: &Form, b: &Form) -> f64 {
    (a - b).coeff_norm()
}

/// Leibniz determinant over all permutations, for small blocks only.
fn leibniz_det(m: &[Vec<f64>]) -> f64 {
    fn rec(m: &[Vec<f64>], row: usize, used: &mut Vec<bool>, sign: f64) -> f64 {
        let n = m.len();
        if row == n {
            return sign;
        }
        let mut acc = 0.0;
        let mut free_seen = 0;
        for c in 0..n {
            if used[c] {
                continue;
            }
            // Sign flips once per free column skipped over.
            let s = if free_seen % 2 == 0 { sign } else { -sign };
            free_seen += 1;
            used[c] = true;
            acc += m[row][c] * rec(m, row + 1, used, s);
            used[c] = false;
        }
        acc
    }
    if m.is_empty() {
        return 1.0;
    }
    rec(m, 0, &mut vec![false; m.len()], 1.0)
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Hodge star from its defining property with Gram entries computed as
/// minors of `g^{-1}` and the volume as `sqrt(det g)`.
fn star_oracle(b: &Form, t: &Triple) -> Form {
    let n = t.n();
    let dim = 2 * n;
    let ginv = t.g_inv();
    let g_rows = t.g().rows();
    let vol = leibniz_det(&g_rows).sqrt() * t.volume().signum();
    let k = b.degree();
    let full = full_mask(dim);
    let mut out = Form::zero(n, dim - k);
    for i_mask in masks(dim, k) {
        let mut s = C::zero();
        for (j_mask, bj) in b.terms() {
            let ii = indices(i_mask);
            let jj = indices(j_mask);
            let sub: Vec<Vec<f64>> = ii.iter().map(|&a| jj.iter().map(|&c| ginv[(a, c)]).collect()).collect();
            s += bj * leibniz_det(&sub);
        }
        let comp = full ^ i_mask;
        let sign = wedge_sign(i_mask, comp) as f64;
        out.set(comp, s * (sign * vol));
    }
    out
}

/// Rotation-averaging projector `(1/M) Σ e^{-i(p-q)θ} e^{θJ}*`.
fn projector_oracle(a: &Form, p: usize, q: usize, t: &Triple) -> Form {
    let k = a.degree();
    let m = 2 * k + 1;
    let dim = t.dim();
    let mut acc = Form::zero(t.n(), k);
    for s in 0..m {
        let th = 2.0 * std::f64::consts::PI * s as f64 / m as f64;
        let r = Mat::from_fn(dim, |i, j| th.sin() * t.j()[(i, j)] + if i == j { th.cos() } else { 0.0 });
        let rotated = pull_back(&r, a).unwrap();
        let phase = C::from_polar(1.0, -(p as f64 - q as f64) * th);
        acc = &acc + &rotated.scale(&phase);
    }
    acc.scale_real(&(1.0 / m as f64))
}

#[test]
fn det_of_standard_omega_n3() {
    let t = Triple::standard(3).unwrap();
    assert!((leibniz_det(&t.omega().rows()) - 1.0).abs() < 1e-15);
}

#[test]
fn star_matches_brute_force_on_random_triples() {
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for case in 0..10 {
            let mut rng = case_rng(11, "star-oracle", (n * 100 + case) as u64);
            let t = random_triple::<f64, _>(&mut rng, n).unwrap();
            for k in 0..=2 * n {
                let b = random_form::<f64, _>(&mut rng, n, k, false);
                worst = worst.max(diff_norm(&hodge_star(&b, &t).unwrap(), &star_oracle(&b, &t)));
            }
        }
    }
    assert!(worst < 1e-11, "worst {worst}");
}

#[test]
fn double_star_sign_law() {
    for n in 1..=4 {
        let t = Triple::standard(n).unwrap();
        for k in 0..=2 * n {
            for case in 0..50 {
                let mut rng = case_rng(12, "double-star", (n * 1000 + k * 100 + case) as u64);
                let a = random_form::<f64, _>(&mut rng, n, k, false);
                let ss = hodge_star(&hodge_star(&a, &t).unwrap(), &t).unwrap();
                let expect = if k % 2 == 0 { a.clone() } else { -a.clone() };
                assert!(diff_norm(&ss, &expect) < 1e-12, "n={n} k={k}");
            }
        }
    }
}

#[test]
fn projector_matches_rotation_average() {
    for n in 1..=3 {
        let mut rng = case_rng(13, "proj", n as u64);
        let t = random_triple::<f64, _>(&mut rng, n).unwrap();
        for k in 0..=2 * n {
            let a = random_form::<f64, _>(&mut rng, n, k, false);
            let bf = pq_decompose(&a, &t).unwrap();
            assert!(diff_norm(&bf.reconstruct(), &a) < 1e-12);
            for p in type_range(n, k) {
                let oracle = projector_oracle(&a, p, k - p, &t);
                assert!(diff_norm(&bf.component(p, k - p), &oracle) < 1e-10, "n={n} k={k} p={p}");
            }
        }
    }
}

#[test]
fn real_form_components_are_conjugate_pairs() {
    let t = Triple::standard(3).unwrap();
    let mut rng = case_rng(14, "conj", 0);
    for k in 0..=6 {
        let a = random_form::<f64, _>(&mut rng, 3, k, true);
        let bf = pq_decompose(&a, &t).unwrap();
        for p in type_range(3, k) {
            let q = k - p;
            assert!(diff_norm(&bf.component(q, p), &bf.component(p, q).conj()) < 1e-12);
        }
    }
}

#[test]
fn weil_squares_to_sign() {
    let t = Triple::standard(3).unwrap();
    for k in 0..=6 {
        let mut rng = case_rng(15, "weil2", k as u64);
        let a = random_form::<f64, _>(&mut rng, 3, k, false);
        let jj = weil_operator(&weil_operator(&a, &t).unwrap(), &t).unwrap();
        let expect = if k % 2 == 0 { a.clone() } else { -a.clone() };
        assert!(diff_norm(&jj, &expect) < 1e-12);
        assert!(diff_norm(&weil_operator_inv(&weil_operator(&a, &t).unwrap(), &t).unwrap(), &a) < 1e-12);
    }
    // Real input, even degree: real output.
    let mut rng = case_rng(15, "weil-real", 0);
    let a = random_form::<f64, _>(&mut rng, 3, 2, true);
    assert!(weil_operator(&a, &t).unwrap().is_real());
}

#[test]
fn star_maps_pq_to_n_minus_q_n_minus_p() {
    for n in 1..=3 {
        let t = Triple::standard(n).unwrap();
        let mut rng = case_rng(16, "star-type", n as u64);
        for k in 0..=2 * n {
            for p in type_range(n, k) {
                let a = random_pure(&mut rng, &t, p, k - p).unwrap();
                let s = hodge_star(&a, &t).unwrap();
                assert_eq!(pure_type(&s, &t).unwrap(), Some((n - (k - p), n - p)));
                let lhs = weil_operator(&s, &t).unwrap();
                let rhs = hodge_star(&weil_operator(&a, &t).unwrap(), &t).unwrap();
                assert!(diff_norm(&lhs, &rhs) < 1e-12);
            }
        }
    }
}

#[test]
fn least_squares_decomposition_n2_k2() {
    let t = Triple::standard(2).unwrap();
    let mut rng = case_rng(17, "lsq", 0);
    let a = random_form::<f64, _>(&mut rng, 2, 2, false);
    let d = primitive_decompose(&a, &t).unwrap();
    let beta0 = dual_lefschetz(&a, &t).unwrap().scale_real(&0.5);
    let beta2 = &a - &t.omega_form().scale(&beta0.coeff(0));
    assert!(diff_norm(d.component(1).unwrap(), &beta0) < 1e-14);
    assert!(diff_norm(d.component(0).unwrap(), &beta2) < 1e-14);

    // Dense least squares over the splitting Λ² = L·Λ⁰ ⊕ P²: solve for the
    // coefficient of ω and a primitive remainder simultaneously.
    let pbasis = llab_core::analysis::primitive_basis(&t, 2).unwrap();
    let mut cols: Vec<nalgebra::DVector<C>> = (0..pbasis.ncols()).map(|j| pbasis.column(j).into_owned()).collect();
    cols.push(nalgebra::DVector::from_vec(t.omega_form().coeffs().to_vec()));
    let m = CMat::from_columns(&cols);
    let rhs = nalgebra::DVector::from_vec(a.coeffs().to_vec());
    let sol = m.svd(true, true).solve(&rhs, 1e-14).unwrap();
    assert!((sol[sol.len() - 1] - beta0.coeff(0)).norm() < 1e-12);
}

#[test]
fn decomposition_is_unique_under_perturbation() {
    let t = Triple::standard(3).unwrap();
    let mut rng = case_rng(18, "unique", 0);
    let a = random_form::<f64, _>(&mut rng, 3, 3, false);
    let d = primitive_decompose(&a, &t).unwrap();
    let base = diff_norm(&d.reconstruct(&t).unwrap(), &a);
    assert!(base < 1e-12);
    for r in level_range(3, 3) {
        let beta = d.component(r).unwrap();
        let bump = random_primitive::<f64, _>(&mut rng, &t, 3 - 2 * r, false).unwrap();
        let mut prev = 0.0;
        for scale in [1e-3, 1e-2, 1e-1] {
            let moved = d.clone().with_component(r, beta + &bump.scale_real(&scale));
            let res = diff_norm(&moved.reconstruct(&t).unwrap(), &a);
            assert!(res > 10.0 * base && res > prev);
            // linear growth
            let expect = lefschetz_pow(&bump, r, &t).unwrap().coeff_norm() * scale;
            assert!((res - expect).abs() < 1e-9 * expect.max(1.0));
            prev = res;
        }
    }
}

#[test]
fn commutator_matches_dense_matrices() {
    for n in 1..=3 {
        let t = Triple::standard(n).unwrap();
        for k in 2..=2 * n {
            let lam = operator_matrix(n, k, k - 2, |a| dual_lefschetz(a, &t)).unwrap();
            for i in 1..=3usize {
                if k - 2 + 2 * i > 2 * n {
                    continue;
                }
                let li_k = operator_matrix(n, k - 2, k - 2 + 2 * i, |a| lefschetz_pow(a, i, &t)).unwrap();
                let mut comm = &li_k * &lam;
                if k + 2 * i <= 2 * n {
                    let li = operator_matrix(n, k, k + 2 * i, |a| lefschetz_pow(a, i, &t)).unwrap();
                    let lam_top = operator_matrix(n, k + 2 * i, k + 2 * i - 2, |a| dual_lefschetz(a, &t)).unwrap();
                    comm -= &lam_top * &li;
                }
                let lim1 = operator_matrix(n, k, k + 2 * i - 2, |a| lefschetz_pow(a, i - 1, &t)).unwrap();
                let coef = i as f64 * (k as f64 - n as f64 + i as f64 - 1.0);
                let resid = (comm - lim1 * C::new(coef, 0.0)).norm();
                assert!(resid < 1e-12, "n={n} k={k} i={i}");
                let mut rng = case_rng(19, "comm", (n * 100 + k * 10 + i) as u64);
                let a = random_form::<f64, _>(&mut rng, n, k, false);
                assert!(commutator_check(&a, i, &t).unwrap() < 1e-12);
            }
        }
    }
}

#[test]
fn sl2_weight_on_every_basis_form() {
    for n in 1..=4 {
        let t = Triple::standard(n).unwrap();
        for k in 0..=2 * n {
            for m in masks(2 * n, k) {
                let e = Form::basis(n, m);
                let d = commutator_difference(&e, 1, &t).unwrap();
                assert!(d.is_none_or(|d| d.coeff_norm() < 1e-13), "n={n} mask={m:b}");
            }
        }
    }
}

#[test]
fn adjointness_against_gram_matrices() {
    let mut rng = case_rng(20, "adj", 0);
    let t = random_triple::<f64, _>(&mut rng, 2).unwrap();
    for k in 0..=2 {
        let l = operator_matrix(2, k, k + 2, |a| lefschetz_l(a, &t)).unwrap();
        let lam = operator_matrix(2, k + 2, k, |a| dual_lefschetz(a, &t)).unwrap();
        // ⟨La, b⟩ = b^H G_{k+2} L a and ⟨a, Λb⟩ = (Λb)^H G_k a.
        let lhs = gram(&t, k + 2).unwrap() * &l;
        let rhs = lam.adjoint() * gram(&t, k).unwrap();
        assert!((lhs - rhs).norm() < 1e-11, "k={k}");
    }
}

#[test]
fn lambda_routes_agree_on_random_triples() {
    for n in 1..=3 {
        let mut rng = case_rng(21, "routes", n as u64);
        let t = random_triple::<f64, _>(&mut rng, n).unwrap();
        for k in 2..=2 * n {
            let a = random_form::<f64, _>(&mut rng, n, k, false);
            let la = dual_lefschetz(&a, &t).unwrap();
            assert!(diff_norm(&la, &dual_lefschetz_via_star(&a, &t).unwrap()) < 1e-10);
            assert!(diff_norm(&la, &dual_lefschetz_via_symplectic_star(&a, &t).unwrap()) < 1e-10);
        }
    }
}

#[test]
fn symplectic_star_defining_property() {
    // α ∧ ∗_s β = ω^{-1}(α, β) vol with ω^{-1}(e^I, e^J) = det(W[I, J]).
    let t = Triple::standard(2).unwrap();
    let w = t.omega_inv();
    for k in 0..=4 {
        for ma in masks(4, k) {
            for mb in masks(4, k) {
                let lhs = wedge(&Form::basis(2, ma), &symplectic_star(&Form::basis(2, mb), &t).unwrap()).unwrap();
                let sub: Vec<Vec<f64>> =
                    indices(ma).iter().map(|&a| indices(mb).iter().map(|&b| w[(a, b)]).collect()).collect();
                assert!((lhs.coeff(0b1111).re - leibniz_det(&sub)).abs() < 1e-14);
            }
        }
    }
}

fn exact_triple(n: usize) -> ExactTriple {
    // A = I + N with N strictly upper triangular: det A = 1, rational inverse.
    let q = |v: i64| Rational::from_integer(v.into());
    let std = ExactTriple::standard(n).unwrap();
    let a = Mat::from_fn(2 * n, |i, j| {
        if i == j {
            q(1)
        } else if j > i {
            q(((i + 2 * j) % 3) as i64 - 1)
        } else {
            q(0)
        }
    });
    let ainv = a.inverse().unwrap();
    ExactTriple::from_omega_j(a.transpose().mul(std.omega()).mul(&a), ainv.mul(std.j()).mul(&a)).unwrap()
}

fn exact_form(n: usize, k: usize, salt: i64) -> ExactForm {
    let coeffs = (0..binomial(2 * n, k))
        .map(|i| {
            let v = (i as i64 * 7 + salt * 3) % 11 - 5;
            let w = (i as i64 * 5 + salt) % 7 - 3;
            Complex::new(Rational::new(v.into(), 3.into()), Rational::from_integer(w.into()))
        })
        .collect();
    ExactForm::from_coeffs(n, k, coeffs).unwrap()
}

#[test]
fn exact_identities_on_rational_triple() {
    for n in 1..=3 {
        let t = exact_triple(n);
        assert!(!t.is_orthonormal());
        for k in 0..=2 * n {
            let a = exact_form(n, k, k as i64);
            let ss = hodge_star(&hodge_star(&a, &t).unwrap(), &t).unwrap();
            assert_eq!(ss, if k % 2 == 0 { a.clone() } else { -a.clone() });
            assert_eq!(symplectic_star(&symplectic_star(&a, &t).unwrap(), &t).unwrap(), a);
            assert_eq!(pq_decompose(&a, &t).unwrap().reconstruct(), a);
            assert_eq!(primitive_decompose(&a, &t).unwrap().reconstruct(&t).unwrap(), a);
            if k >= 2 {
                let la = dual_lefschetz(&a, &t).unwrap();
                assert_eq!(la, dual_lefschetz_via_star(&a, &t).unwrap());
                assert_eq!(la, dual_lefschetz_via_symplectic_star(&a, &t).unwrap());
            }
            if k <= n {
                let d = primitive_decompose(&a, &t).unwrap();
                let b = d.component(0).unwrap();
                for r in 0..=n - k {
                    assert!(weil_relation_difference(b, r, &t).unwrap().is_zero(), "n={n} k={k} r={r}");
                }
            }
        }
    }
}

#[test]
fn exact_pq_projectors_are_idempotent_and_orthogonal() {
    let t = exact_triple(2);
    for k in 0..=4 {
        let a = exact_form(2, k, 1);
        for p in type_range(2, k) {
            let once = pq_project(&a, p, k - p, &t).unwrap();
            for p2 in type_range(2, k) {
                let twice = pq_project(&once, p2, k - p2, &t).unwrap();
                if p2 == p {
                    assert_eq!(twice, once);
                } else {
                    assert!(twice.is_zero());
                }
            }
        }
    }
}

#[test]
fn metric_raise_is_identity_for_standard() {
    let t = Triple::standard(2).unwrap();
    let a = Form::basis(2, 0b0011);
    assert_eq!(raise(&a, &t).unwrap(), a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn j_action_is_an_isometry(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=6) {
        prop_assume!(k <= 2 * n);
        let mut rng = case_rng(seed, "j-iso", 0);
        let t = random_triple::<f64, _>(&mut rng, n).unwrap();
        let a = random_form::<f64, _>(&mut rng, n, k, false);
        let b = random_form::<f64, _>(&mut rng, n, k, false);
        let ja = j_action(&a, &t).unwrap();
        let jb = j_action(&b, &t).unwrap();
        let lhs = inner(&ja, &jb, &t).unwrap();
        let rhs = inner(&a, &b, &t).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn inner_product_is_hermitian_via_star(seed in any::<u64>(), n in 1usize..=3, k in 0usize..=6) {
        prop_assume!(k <= 2 * n);
        let mut rng = case_rng(seed, "herm", 0);
        let t = random_triple::<f64, _>(&mut rng, n).unwrap();
        let a = random_form::<f64, _>(&mut rng, n, k, false);
        let b = random_form::<f64, _>(&mut rng, n, k, false);
        let ab = inner(&a, &b, &t).unwrap();
        let ba = inner(&b, &a, &t).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-10);
        // a ∧ ∗conj(b) = ⟨a, b⟩ vol
        let top = wedge(&a, &hodge_star(&b.conj(), &t).unwrap()).unwrap();
        let vol = t.volume();
        prop_assert!((top.coeff(full_mask(2 * n)) - ab * *vol).norm() < 1e-10 * (1.0 + ab.norm()));
    }

    #[test]
    fn j_is_an_involution_on_even_degree(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = case_rng(seed, "jj", 0);
        let t = random_triple::<f64, _>(&mut rng, n).unwrap();
        let a = random_form::<f64, _>(&mut rng, n, 2, true);
        let jja = j_action(&j_action(&a, &t).unwrap(), &t).unwrap();
        prop_assert!(diff_norm(&jja, &a) < 1e-10);
    }
}

