//! Acceptance suite. Each criterion prints one PASS/FAIL line; the test fails
//! if any criterion does.

use std::f64::consts::PI;
use std::process::Command;

use rand::Rng;
use wcolab::diagnostics::{
    boundary_weight_profile, default_norm_samples, eigen_weight_check, hyponormality_verdict, kernel_defect_max,
    normal_symbol_for, normaloid_verdict, parabolic_kernel_check, spectral_radius_closed, spectral_radius_gelfand,
    zero_count, NormaloidClass, Tolerances, Verdict, DEFAULT_BOUNDARY_GRID,
};
use wcolab::sampling::{
    annulus_point, disk_pairs, disk_points, random_hyperbolic_automorphism, random_kernel,
    random_parabolic_automorphism, random_polynomial, random_self_map, rng, unimodular,
};
use wcolab::{c64, Complex64, Exec, LftMap, MapKind, Space, SymbolSpec, WcoSpec};
use wcolab_cli::{strip_timestamp, PRESETS};

const N: usize = 256;
const M: usize = 64;
const SEED: u64 = 20240611;
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn spaces() -> [Space; 3] {
    [Space::Hardy, Space::Bergman { alpha: 0.0 }, Space::Bergman { alpha: 1.0 }]
}

/// Ten hyperbolic then ten parabolic automorphisms, each with its normal
/// weight, cycling through the three spaces.
fn normal_cases() -> Vec<(WcoSpec, bool, f64)> {
    let mut r = rng(SEED);
    let y_max = 2.0 / 3f64.sqrt();
    let mut out = Vec::new();
    for k in 0..20 {
        let parabolic = k >= 10;
        let phi = if parabolic {
            random_parabolic_automorphism(&mut r, 0.3, y_max)
        } else {
            random_hyperbolic_automorphism(&mut r, 0.5)
        };
        let space = spaces()[k % 3].clone();
        let ns = normal_symbol_for(&phi, ONE, &space).expect("automorphism");
        let op = WcoSpec::lft(ns.psi, phi, space).expect("valid operator");
        out.push((op, parabolic, ns.identity_residual));
    }
    out
}

fn criterion_1() -> Outcome {
    let mut r = rng(SEED + 1);
    let points = disk_points(8, 0.6, SEED);
    let mut worst = 0.0_f64;
    for k in 0..50 {
        let phi = random_self_map(&mut r);
        let psi = if r.random::<bool>() { random_polynomial(&mut r, 3) } else { random_kernel(&mut r, 0.5) };
        let op = WcoSpec::lft(psi, phi, spaces()[k % 3].clone()).expect("valid operator");
        let t = op.truncate(N, Exec::default()).expect("section");
        for w in &points {
            worst = worst.max(op.kernel_adjoint_residual(&t, *w).expect("residual"));
        }
    }
    Outcome::new(worst <= 1e-8, format!("max residual {worst:e} (limit 1e-8)"))
}

fn criterion_2(cases: &[(WcoSpec, bool, f64)]) -> Outcome {
    let pairs = disk_pairs(25, 0.6, SEED);
    let (mut defect, mut eig, mut identity) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (op, _, residual) in cases {
        defect = defect.max(kernel_defect_max(op, &pairs, N, Exec::default()).expect("defect").max);
        let h = hyponormality_verdict(op, N, M, 1e-6, Exec::default()).expect("commutator");
        eig = eig.max(h.max_abs_eig());
        identity = identity.max(*residual);
    }
    Outcome::new(
        defect <= 1e-7 && eig <= 1e-6 && identity <= 1e-10,
        format!(
            "kernel defect {defect:e} (limit 1e-7), commutator |eig| {eig:e} (limit 1e-6), identity {identity:e} (limit 1e-10)"
        ),
    )
}

fn criterion_3(cases: &[(WcoSpec, bool, f64)]) -> Outcome {
    let pairs = disk_pairs(25, 0.6, SEED);
    let (mut defect, mut eig) = (f64::INFINITY, f64::INFINITY);
    for (op, _, _) in cases {
        let psi = op.psi.clone().plus(SymbolSpec::polynomial(&[ZERO, c64(0.1, 0.0)]));
        let perturbed = op.with_psi(psi).expect("perturbed operator");
        defect = defect.min(kernel_defect_max(&perturbed, &pairs, N, Exec::default()).expect("defect").max);
        let h = hyponormality_verdict(&perturbed, N, M, 1e-6, Exec::default()).expect("commutator");
        eig = eig.min(h.max_abs_eig());
    }
    Outcome::new(
        defect >= 1e-3 && eig >= 1e-3,
        format!("smallest max defect {defect:e}, smallest commutator |eig| {eig:e} (both need >= 1e-3)"),
    )
}

fn criterion_4(cases: &[(WcoSpec, bool, f64)]) -> Outcome {
    let mut worst = 0.0_f64;
    for (op, _, _) in cases {
        let phi = op.phi.as_lft().expect("lft");
        let gamma = op.space.gamma().expect("gamma");
        let sigma0 = phi.adjoint_symbols(gamma).expect("symbols").sigma.evaluate(ZERO).expect("finite");
        let phi0 = phi.evaluate(ZERO).expect("finite");
        worst = worst.max((phi0.norm() - sigma0.norm()).abs());
    }
    Outcome::new(worst <= 1e-12, format!("max ||phi(0)| - |sigma(0)|| {worst:e} (limit 1e-12)"))
}

fn criterion_5() -> Outcome {
    let tol = Tolerances::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for t in [0.5, 1.0, 2.0] {
        let phi = LftMap::parabolic_from(ONE, c64(t, 0.0)).expect("parabolic");
        let op = WcoSpec::lft(SymbolSpec::one(), phi, Space::Hardy).expect("valid operator");
        let r = spectral_radius_closed(&op).expect("closed radius");
        let bound = op.norm_lower_bound(&[ZERO]).expect("bound");
        let expect = (1.0 - (t / (2.0 + t)).powi(2)).powf(-0.5);
        let verdict = normaloid_verdict(&op, &default_norm_samples(&op), N, M, &tol, Exec::default()).expect("verdict");
        let ok = r == 1.0
            && (bound - expect).abs() <= 1e-12
            && bound > 1.05
            && verdict.class == NormaloidClass::NotNormaloid;
        pass &= ok;
        parts.push(format!(
            "t={t}: r={r}, bound={bound:.6} (formula {expect:.6}, need > 1.05), {}",
            verdict.class.as_str()
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let phi = LftMap::real(1.0, 0.5, 0.5, 1.0).expect("lft");
    let mut pass = true;
    let mut parts = Vec::new();
    for (psi, expect) in [(SymbolSpec::one(), 3f64.sqrt()), (SymbolSpec::kernel(c64(-0.5, 0.0)), 2.0 / 3f64.sqrt())] {
        let op = WcoSpec::lft(psi, phi, Space::Hardy).expect("valid operator");
        let closed = spectral_radius_closed(&op).expect("closed radius");
        let t = op.truncate(N, Exec::default()).expect("section");
        let g = spectral_radius_gelfand(&t.matrix, 64, Exec::default()).expect("gelfand").value;
        let rel = (g - closed).abs() / closed;
        pass &= (closed - expect).abs() <= 1e-12 && rel <= 0.05;
        parts.push(format!(
            "closed {closed:.6} (expect {expect:.6}), gelfand {g:.6}, relative gap {rel:.3} (limit 0.05)"
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

fn criterion_7(cases: &[(WcoSpec, bool, f64)]) -> Outcome {
    let (mut diff, mut eigen) = (0.0_f64, 0.0_f64);
    let mut constant = true;
    for (op, parabolic, _) in cases {
        let p = boundary_weight_profile(op, DEFAULT_BOUNDARY_GRID, 1e-9).expect("profile");
        diff = diff.max(p.max_abs_difference);
        eigen = eigen.max(eigen_weight_check(op).expect("eigen weight"));
        if *parabolic {
            constant &= p.constant_modulus;
        }
    }
    Outcome::new(
        diff <= 1e-9 && eigen <= 1e-9 && constant,
        format!("boundary difference {diff:e}, eigen weight {eigen:e} (limits 1e-9), parabolic constancy {constant}"),
    )
}

fn criterion_8() -> Outcome {
    let phi = LftMap::parabolic_from(ONE, ONE).expect("parabolic");
    let mut pass = true;
    let mut parts = Vec::new();
    for modulus in [0.2, 1.0 / 3.0, 0.5] {
        for theta in [0.0, 1.1, PI] {
            let a = Complex64::from_polar(modulus, theta);
            let op = WcoSpec::lft(SymbolSpec::kernel(a), phi, Space::Hardy).expect("valid operator");
            let report = parabolic_kernel_check(&op, 1e-10).expect("check");
            let ruled_out = report.normal == Verdict::Violated;
            pass &= ruled_out == ((modulus - 1.0 / 3.0).abs() > 1e-10);
        }
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(modulus, 0.0)), phi, Space::Hardy).expect("valid operator");
        parts.push(format!("|a|={modulus:.4}: {}", parabolic_kernel_check(&op, 1e-10).expect("check").normal.as_str()));
    }
    Outcome::new(pass, parts.join("; "))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `‖zⁿ‖²` in the weighted Bergman space as a radial integral. With
/// `1 − r² = s²` the integrand `2(α+1)(1 − s²)ⁿ s^{2α+1}` is smooth on `[0, 1]`.
fn bergman_beta_quadrature(n: usize, alpha: f64, rule: &[(f64, f64)]) -> f64 {
    let sq: f64 = rule
        .iter()
        .map(|(x, w)| {
            let s = 0.5 * (x + 1.0);
            0.5 * w * 2.0 * (alpha + 1.0) * (1.0 - s * s).powi(n as i32) * s.powf(2.0 * alpha + 1.0)
        })
        .sum();
    sq.sqrt()
}

fn poly_from_roots(lead: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![lead];
    for r in roots {
        let mut next = vec![ZERO; c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= ck * r;
        }
        c = next;
    }
    c
}

fn criterion_9() -> Outcome {
    let mut r = rng(SEED + 9);
    let mut translation = 0.0_f64;
    for _ in 0..100 {
        let zeta = unimodular(&mut r);
        let t = c64(r.random_range(0.0..2.0), r.random_range(-2.0..2.0));
        let phi = LftMap::parabolic_from(zeta, t).expect("parabolic");
        translation = translation.max((phi.translation_number().expect("translation") - t).norm());
    }

    let rule = gauss_legendre(48);
    let mut beta = 0.0_f64;
    for alpha in [0.0, 0.5, 1.5] {
        let space = Space::Bergman { alpha };
        for n in 0..=32 {
            let oracle = bergman_beta_quadrature(n, alpha, &rule);
            beta = beta.max((space.beta_norm(n).expect("beta") - oracle).abs());
        }
    }

    let mut mismatches = 0;
    for k in 0..20 {
        let inside: Vec<Complex64> = (0..k % 4).map(|_| annulus_point(&mut r, 0.0, 0.85)).collect();
        let outside: Vec<Complex64> = (0..1 + (k / 4) % 3).map(|_| annulus_point(&mut r, 1.1, 3.0)).collect();
        let roots: Vec<Complex64> = inside.iter().chain(&outside).copied().collect();
        let psi = SymbolSpec::polynomial(&poly_from_roots(unimodular(&mut r), &roots));
        let zc = zero_count(&psi, &Space::Hardy, 0.95, 4096, Exec::default()).expect("zero count");
        if zc.count != inside.len() as i64 {
            mismatches += 1;
        }
    }

    Outcome::new(
        translation <= 1e-12 && beta <= 1e-10 && mismatches == 0,
        format!(
            "translation round trip {translation:e} (limit 1e-12), beta vs quadrature {beta:e} (limit 1e-10), zero count mismatches {mismatches}/20"
        ),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut failures = Vec::new();
    for p in PRESETS {
        let mut reports = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{}-{run}.json", p.id));
            let status = Command::new(env!("CARGO_BIN_EXE_wcolab"))
                .args(["verify", p.id, "--seed", "0", "--out"])
                .arg(&path)
                .status()
                .expect("spawn wcolab");
            if status.code() != Some(0) {
                failures.push(format!("{} exit {:?}", p.id, status.code()));
            }
            let text = std::fs::read_to_string(&path).unwrap_or_default();
            reports.push(strip_timestamp(&text).unwrap_or_default());
        }
        if reports[0].is_empty() || reports[0] != reports[1] {
            failures.push(format!("{} reports differ", p.id));
        }
    }
    let detail = if failures.is_empty() {
        format!("{} presets, identical reports, exit 0", PRESETS.len())
    } else {
        failures.join("; ")
    };
    Outcome::new(failures.is_empty(), detail)
}

#[test]
fn acceptance() {
    let cases = normal_cases();
    assert_eq!(cases.iter().filter(|c| c.1).count(), 10);
    assert!(cases
        .iter()
        .all(|(op, _, _)| op.phi.as_lft().unwrap().classify().unwrap().kind != MapKind::EllipticAutomorphism));

    let results = [
        ("kernel adjoint battery", criterion_1()),
        ("normal weights", criterion_2(&cases)),
        ("perturbed weights", criterion_3(&cases)),
        ("symbol moduli", criterion_4(&cases)),
        ("parabolic normaloid", criterion_5()),
        ("gelfand radius", criterion_6()),
        ("boundary weight", criterion_7(&cases)),
        ("parabolic kernel", criterion_8()),
        ("round trips and oracles", criterion_9()),
        ("determinism", criterion_10()),
    ];
    let mut failed = Vec::new();
    for (k, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", k + 1, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
