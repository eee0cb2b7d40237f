//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances are fixed here, not taken from defaults.

use std::time::{Duration, Instant};

use llab_cli::suites::identities::run_identities;
use llab_cli::{run_suite, SuiteConfig};
use llab_core::bigraded::type_range;
use llab_core::Triple;
use llab_hyperbolic::mesh::{build_disc_mesh, Model};
use llab_hyperbolic::spectral::{dirichlet_lambda1, mesh_spacing, richardson};
use llab_hyperbolic::{bounded_primitive, gromov_bound};
use llab_torus::{
    anti_invariant_suite, harmonic_space, self_dual_invariant_relation, verify_kahler_identity, verify_lemma_l8,
    verify_p7_decomposition, FourierComplex,
};

const TOL: f64 = 1e-10;

/// First Dirichlet eigenvalue of the geodesic ball of radius R in H²,
/// from the independent radial shooting oracle (RK4, frozen).
const SHOOTING: [(f64, f64); 3] = [(2.0, 1.767_253_090_338), (4.0, 0.663_319_626_516), (6.0, 0.447_622_822_090)];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn torus(n: usize, cutoff: usize) -> FourierComplex {
    FourierComplex::new(n, cutoff, Triple::standard(n).unwrap()).unwrap()
}

fn identities() -> (Verdict, Verdict) {
    let start = Instant::now();
    let mut worst = (0.0f64, String::new());
    let mut cross = (0.0f64, usize::MAX);
    let mut vacuous = Vec::new();
    for n in 1..=4 {
        for (name, r) in run_identities(n, 1000, 20_241).unwrap() {
            if name == "cross_orthogonality" {
                cross.0 = cross.0.max(r.max_residual);
                // One draw per case at every degree with two or more levels.
                let degrees = (0..=2 * n).filter(|&k| llab_core::lefschetz::level_range(n, k).count() >= 2).count();
                if let Some(per) = r.cases.checked_div(degrees) {
                    cross.1 = cross.1.min(per);
                }
                continue;
            }
            if r.cases == 0 && name != "lambda_via_star" && name != "lambda_via_symplectic_star" {
                vacuous.push(format!("n{n}/{name}"));
            }
            if r.max_residual > worst.0 {
                worst = (r.max_residual, format!("n{n}/{name}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let one = verdict(
        worst.0 < TOL && vacuous.is_empty() && elapsed < Duration::from_secs(60),
        format!("max residual {:e} ({}), {:.1} s, vacuous {:?}", worst.0, worst.1, elapsed.as_secs_f64(), vacuous),
    );
    let two = verdict(cross.0 < TOL && cross.1 >= 500, format!("max |<L^p x, L^q y>| rel {:e}, {} cases per (n,k)", cross.0, cross.1));
    (one, two)
}

fn harmonic_dims() -> Verdict {
    let start = Instant::now();
    let t4 = harmonic_space(&torus(2, 2), 2).unwrap();
    let t6 = harmonic_space(&torus(3, 2), 2).unwrap();
    let bideg = |r: &llab_torus::HarmonicSpaceReport, p: usize, q: usize| {
        r.bidegree_dims.iter().find(|d| d.p == p && d.q == q).map_or(0, |d| d.dim)
    };
    let got4 = (t4.total_dim, bideg(&t4, 1, 1), bideg(&t4, 2, 0) + bideg(&t4, 0, 2), t4.invariant_dim, t4.anti_invariant_dim);
    let got6 = (t6.total_dim, t6.invariant_dim, t6.anti_invariant_dim);
    let elapsed = start.elapsed();
    verdict(
        got4 == (6, 4, 2, Some(4), Some(2)) && got6 == (15, Some(9), Some(6)) && elapsed < Duration::from_secs(120),
        format!(
            "T4 {} = {} + {} = {:?} + {:?}; T6 {} = {:?} + {:?}; N=2, {:.1} s",
            got4.0, got4.1, got4.2, got4.3, got4.4, got6.0, got6.1, got6.2, elapsed.as_secs_f64()
        ),
    )
}

fn p7() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in [2, 3] {
        let fc = torus(n, 1);
        for k in 0..=2 * n {
            for p in type_range(n, k) {
                let r = verify_p7_decomposition(&fc, p, k - p).unwrap();
                worst = worst.max(r.span_residual).max(r.containment_residual);
                count += usize::from(r.sum_dim == r.harmonic_dim);
            }
        }
    }
    let total: usize = [2usize, 3].iter().map(|&n| (0..=2 * n).map(|k| type_range(n, k).count()).sum::<usize>()).sum();
    verdict(worst < TOL && count == total, format!("max span/containment residual {worst:e}, {count}/{total} types with equal dimension"))
}

fn l8_kahler() -> Verdict {
    let mut worst = (0.0f64, 0.0f64);
    for n in [2, 3] {
        let fc = torus(n, 1);
        worst.0 = worst.0.max(verify_lemma_l8(&fc, 500, 41).max_residual);
        let k = verify_kahler_identity(&fc, 500, 43);
        worst.1 = worst.1.max(k.max_residual).max(k.max_type_leakage);
    }
    verdict(worst.0 < TOL && worst.1 < TOL, format!("L8 {:e}, Kahler {:e}, 500 samples on T4 and T6", worst.0, worst.1))
}

fn hyperbolic_gap() -> Verdict {
    let start = Instant::now();
    let (h1, h2) = (0.12, 0.06);
    let mut lines = Vec::new();
    let mut ok = true;
    let mut previous = f64::INFINITY;
    for (radius, oracle) in SHOOTING {
        let coarse = build_disc_mesh(Model::Hyperbolic, radius, h1).unwrap();
        let fine = build_disc_mesh(Model::Hyperbolic, radius, h2).unwrap();
        let l1 = dirichlet_lambda1(&coarse, 0).unwrap();
        let l2 = dirichlet_lambda1(&fine, 0).unwrap();
        let extrapolated = richardson(mesh_spacing(&coarse), l1.lambda1(), mesh_spacing(&fine), l2.lambda1(), 2.0);
        let theta = bounded_primitive(&fine).unwrap().sup_norm;
        let bound = gromov_bound(1, 0, theta).unwrap().value;
        let rel = (extrapolated - oracle).abs() / oracle;
        let certified = l1.certified(1e-8) && l2.certified(1e-8);
        let row_ok = rel < 0.03
            && extrapolated < previous
            && [l1.lambda1(), l2.lambda1(), extrapolated].iter().all(|&l| l >= 0.25 - 0.01 && l >= bound)
            && (theta - 1.0).abs() < 1e-3
            && fine.vertex_count() <= 500_000
            && certified;
        ok &= row_ok;
        previous = extrapolated;
        lines.push(format!(
            "R={radius}: {extrapolated:.6} vs {oracle:.6} ({:.4}%), bound {bound:.4}, |theta| {theta:.6}, {} vertices",
            100.0 * rel,
            fine.vertex_count()
        ));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(600);
    verdict(ok, format!("{}; {:.1} s", lines.join("; "), elapsed.as_secs_f64()))
}

fn self_dual() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [2, 3] {
        let r = self_dual_invariant_relation(&torus(n, 1), 200, 47).unwrap();
        ok &= r.passes(TOL);
        parts.push(format!(
            "n={n}: closed {:e}, energy relation {:e} (|da0|^2/|df|^2 in [{:.6}, {:.6}]), d^L relation {:e}",
            r.closed_residual, r.df_relation_residual, r.energy_ratio_min, r.energy_ratio_max, r.dlambda_residual
        ));
    }
    verdict(ok, parts.join("; "))
}

fn anti_invariant() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [2, 3] {
        let r = anti_invariant_suite(&torus(n, 1)).unwrap();
        let matched: Vec<&str> = r.candidates.iter().filter(|c| c.matches).map(|c| c.label.as_str()).collect();
        ok &= r.distinct_matches == 1 && r.fit_residual < TOL;
        parts.push(format!("n={n}: c = {:.12} (fit {:e}) matches {:?}", r.measured_c, r.fit_residual, matched));
    }
    verdict(ok, parts.join("; "))
}

fn determinism() -> Verdict {
    let mut configs = vec![
        SuiteConfig { n: vec![2, 3], cases: 50, ..SuiteConfig::new("identities") },
        SuiteConfig { n: vec![2], cases: 30, ..SuiteConfig::new("torus-all") },
        SuiteConfig { points: vec![(2.0, 0.3), (3.0, 0.3)], n: vec![1], ..SuiteConfig::new("hyperbolic") },
    ];
    let mut diffs = Vec::new();
    for cfg in &mut configs {
        let d = tempfile::tempdir().unwrap();
        cfg.out = Some(d.path().to_path_buf());
        let mut texts = Vec::new();
        for _ in 0..2 {
            let report = run_suite(cfg).unwrap();
            let written = std::fs::read_to_string(d.path().join("report.json")).unwrap();
            let mut parsed = llab_cli::ReportBundle::from_json(&written).unwrap();
            parsed.timestamp.clear();
            texts.push((report.canonical_json(), std::fs::read(d.path().join("residuals.csv")).unwrap(), parsed.config.hash()));
        }
        if texts[0] != texts[1] {
            diffs.push(cfg.suite.clone());
        }
    }
    verdict(diffs.is_empty(), format!("{} suites rerun, differing: {:?}", configs.len(), diffs))
}

fn main() {
    let (c1, c2) = identities();
    let results = [
        c1,
        c2,
        harmonic_dims(),
        p7(),
        l8_kahler(),
        hyperbolic_gap(),
        self_dual(),
        anti_invariant(),
        determinism(),
    ];
    let mut failed = 0;
    for (i, v) in results.iter().enumerate() {
        println!("{} criterion {}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
