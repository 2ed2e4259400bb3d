//! Built-in verification runs. Every preset fixes its operators, the checks
//! to run and the verdict each check must produce.

use std::collections::BTreeMap;

use rand::Rng;
use wcolab::sampling::{
    annulus_point, random_hyperbolic_automorphism, random_parabolic_automorphism, random_polynomial, random_self_map,
    rng, unimodular,
};
use wcolab::{c64, Complex64, LftMap};

use crate::checks::CheckRequest;
use crate::scenario::{
    pair, BergmanDoc, CoeffsDoc, NormalAutoDoc, PhiDoc, PsiDoc, ScenarioDoc, SpaceDoc, TermsDoc, DEFAULT_M, DEFAULT_N,
};

/// Largest `|phi(0)|` drawn for random automorphisms. Beyond about 1/2 the
/// default sections no longer resolve the commutator of a normal operator.
const MAX_SHIFT: f64 = 0.5;
/// Translation `y` with `|phi(0)| = y / sqrt(4 + y^2) = 1/2`.
const PARABOLIC_Y_MAX: f64 = 1.154_700_538_379_251_5;

pub struct Preset {
    pub id: &'static str,
    /// The statement being exercised.
    pub statement: &'static str,
    /// What the preset asserts.
    pub expectation: &'static str,
    /// Include the full defect report for each operator.
    pub full_report: bool,
    build: fn(u64) -> Vec<ScenarioDoc>,
}

impl Preset {
    pub fn scenarios(&self, seed: u64) -> Vec<ScenarioDoc> {
        (self.build)(seed)
    }

    /// The checks a scenario runs when it names this preset: every check the
    /// preset uses, each with its default expectation.
    pub fn checks(&self) -> Vec<CheckRequest> {
        let mut names: Vec<String> = self
            .scenarios(0)
            .iter()
            .flat_map(|s| s.checks.clone().unwrap_or_default())
            .map(|c| c.split(':').next().unwrap_or_default().to_string())
            .collect();
        names.sort();
        names.dedup();
        names.into_iter().map(|name| CheckRequest { name, expect: None }).collect()
    }
}

pub fn find(id: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.id == id)
}

pub static PRESETS: &[Preset] = &[
    Preset {
        id: "kernel-adjoint-battery",
        statement: "C* K_w = conj(psi(w)) K_phi(w) for every w in the disk",
        expectation: "50 random operators, 8 points each: every finite-section residual <= 1e-8",
        full_report: false,
        build: kernel_adjoint_battery,
    },
    Preset {
        id: "normaloid-inequality",
        statement: "if C_{K_a,phi} is normaloid and phi has boundary Denjoy-Wolff point zeta, then \
                    (1-|phi(a)|^2)(1+|a|)/(1-|a|) >= phi'(zeta), and 2|a| >= |phi(a)|^2 (1+|a|) when phi'(zeta) = 1",
        expectation:
            "a = 0 with phi = (z+1)/(3-z) violates it and is NOT_NORMALOID; a = 1/2 and phi = (1+z)/2 satisfy it",
        full_report: false,
        build: normaloid_inequality,
    },
    Preset {
        id: "parabolic-not-normaloid",
        statement:
            "a parabolic non-automorphism with phi'(zeta) = 1 gives a composition operator that is not normaloid",
        expectation: "NOT_NORMALOID for phi = (z+1)/(3-z) and for translation numbers t = 1/2, 1, 2 on H^2 and A^2_0",
        full_report: true,
        build: parabolic_not_normaloid,
    },
    Preset {
        id: "kernel-modulus",
        statement: "for psi = K_a and phi an automorphism, normality forces |phi(0)| = |a|",
        expectation:
            "a = -1/2 passes the equality with a normal section; a = 0.2 violates it and the kernel defect is visible",
        full_report: true,
        build: kernel_modulus,
    },
    Preset {
        id: "parabolic-kernel-rule-out",
        statement: "for a parabolic non-automorphism with translation number t and psi = K_a, normality forces \
                    |a| = |t/(2+t)| = |sigma(0)|",
        expectation: "t = 1: |a| = 1/3 is not ruled out, |a| = 0.2 and 0.5 are",
        full_report: false,
        build: parabolic_kernel_rule_out,
    },
    Preset {
        id: "boundary-profile",
        statement: "normality forces |w(zeta)| = |w(phi(zeta))| on the circle for w = (1 - conj(a) z)^gamma psi",
        expectation: "the normal weight passes on a 4096-point grid; psi = K_0.2 fails",
        full_report: false,
        build: boundary_profile,
    },
    Preset {
        id: "eigen-weight",
        statement: "normality forces w o phi = w",
        expectation: "normal weights pass to 1e-9; a perturbed weight fails",
        full_report: false,
        build: eigen_weight,
    },
    Preset {
        id: "normal-hyperbolic",
        statement: "for a hyperbolic automorphism, psi = psi(0) K_sigma(0) gives a normal operator",
        expectation: "10 random cases over H^2, A^2_0, A^2_1: every normality check CONSISTENT",
        full_report: false,
        build: normal_hyperbolic,
    },
    Preset {
        id: "normal-parabolic",
        statement: "for a parabolic automorphism, psi = psi(0) K_sigma(0) gives a normal operator",
        expectation: "t = 0.8i plus 9 random cases: every normality check CONSISTENT and |w| constant",
        full_report: false,
        build: normal_parabolic,
    },
    Preset {
        id: "normal-perturbed",
        statement: "the normal weight is unique: any other weight breaks normality",
        expectation: "adding 0.1 z to each normal weight gives kernel defect and commutator eigenvalues >= 1e-3",
        full_report: false,
        build: normal_perturbed,
    },
    Preset {
        id: "parabolic-constant-weight",
        statement: "for a parabolic automorphism and a cohyponormal operator, |w| is constant on the circle",
        expectation: "CONSTANT for the normal weight, NOT_CONSTANT for psi = K_0.2",
        full_report: false,
        build: parabolic_constant_weight,
    },
    Preset {
        id: "orbit-chain",
        statement: "a boundary point with a finite orbit under a parabolic or hyperbolic automorphism is a fixed point",
        expectation:
            "on a 64-point grid plus the fixed points, orbits are finite exactly at fixed points; the weight chain \
                      along the orbit of the maximizer is nondecreasing for normal weights",
        full_report: false,
        build: orbit_chain,
    },
    Preset {
        id: "invertible-automorphism",
        statement: "a normal weighted composition operator is bounded below iff invertible",
        expectation: "psi = 1, phi = (z+1/2)/(1+z/2): sigma_min of the sections stays away from zero",
        full_report: true,
        build: invertible_automorphism,
    },
    Preset {
        id: "not-bounded-below",
        statement: "a normal weighted composition operator is bounded below iff invertible",
        expectation: "psi = 1, phi = z/2: sigma_min of the sections halves with every added column and tends to zero",
        full_report: false,
        build: not_bounded_below,
    },
    Preset {
        id: "spectral-radius",
        statement: "r(C) = |psi(zeta)| phi'(zeta)^(-gamma/2) for boundary Denjoy-Wolff point zeta",
        expectation: "psi = 1 and psi = K_-1/2 with phi = (z+1/2)/(1+z/2): the kernel norm bound does not exceed the \
                      closed-form radius, so both are NORMALOID_CONSISTENT; the Gelfand estimate is reported only",
        full_report: true,
        build: spectral_radius,
    },
    Preset {
        id: "zero-free",
        statement: "a cohyponormal weighted composition operator has a weight without zeros in the disk",
        expectation: "normal kernel weights are ZERO_FREE; psi = z - 1/4 HAS_ZEROS",
        full_report: false,
        build: zero_free,
    },
];

const HARDY: SpaceDoc = SpaceDoc::Hardy;
const SPACES: [SpaceDoc; 3] =
    [SpaceDoc::Hardy, SpaceDoc::Bergman(BergmanDoc { alpha: 0.0 }), SpaceDoc::Bergman(BergmanDoc { alpha: 1.0 })];

fn doc(name: String, space: SpaceDoc, phi: &LftMap, psi: PsiDoc, seed: u64, checks: &[&str]) -> ScenarioDoc {
    ScenarioDoc {
        name,
        space,
        phi: PhiDoc::from_lft(phi),
        psi,
        n: DEFAULT_N,
        m: DEFAULT_M,
        seed,
        checks: Some(checks.iter().map(|c| c.to_string()).collect()),
        preset: None,
        tol: BTreeMap::new(),
    }
}

fn hyperbolic() -> LftMap {
    LftMap::real(1.0, 0.5, 0.5, 1.0).expect("valid map")
}

fn random_psi0<R: Rng>(r: &mut R) -> Complex64 {
    annulus_point(r, 0.5, 2.0)
}

fn normal_auto(psi0: Complex64) -> PsiDoc {
    PsiDoc::NormalAuto(NormalAutoDoc { psi0: Some(pair(psi0)) })
}

fn kernel_adjoint_battery(seed: u64) -> Vec<ScenarioDoc> {
    let mut r = rng(seed ^ 0x21);
    (0..50)
        .map(|i| {
            let phi = random_self_map(&mut r);
            let psi = if r.random::<bool>() {
                random_polynomial(&mut r, 3)
            } else {
                wcolab::wco::SymbolSpec::kernel(annulus_point(&mut r, 0.0, 0.5))
            };
            let space = SPACES[i % 3].clone();
            doc(
                format!("kernel-adjoint-battery/{i}"),
                space,
                &phi,
                PsiDoc::from_symbol(&psi),
                seed + i as u64,
                &["kernel_adjoint"],
            )
        })
        .collect()
}

fn normaloid_inequality(seed: u64) -> Vec<ScenarioDoc> {
    let parabolic = LftMap::real(1.0, 1.0, -1.0, 3.0).expect("valid map");
    let half = LftMap::real(1.0, 1.0, 0.0, 2.0).expect("valid map");
    vec![
        doc(
            "normaloid-inequality/a=0".into(),
            HARDY,
            &parabolic,
            PsiDoc::kernel(c64(0.0, 0.0)),
            seed,
            &["normaloid_inequality:VIOLATED", "normaloid:NOT_NORMALOID"],
        ),
        doc(
            "normaloid-inequality/a=1/2".into(),
            HARDY,
            &parabolic,
            PsiDoc::kernel(c64(0.5, 0.0)),
            seed,
            &["normaloid_inequality:CONSISTENT"],
        ),
        doc(
            "normaloid-inequality/hyperbolic".into(),
            HARDY,
            &half,
            PsiDoc::kernel(c64(0.0, 0.0)),
            seed,
            &["normaloid_inequality:CONSISTENT"],
        ),
    ]
}

fn parabolic_not_normaloid(seed: u64) -> Vec<ScenarioDoc> {
    let mut out = vec![doc(
        "parabolic-not-normaloid/(z+1)/(3-z)".into(),
        HARDY,
        &LftMap::real(1.0, 1.0, -1.0, 3.0).expect("valid map"),
        PsiDoc::constant(1.0),
        seed,
        &["normaloid:NOT_NORMALOID"],
    )];
    for t in [0.5, 1.0, 2.0] {
        let phi = LftMap::parabolic_from(c64(1.0, 0.0), c64(t, 0.0)).expect("valid map");
        for space in [SpaceDoc::Hardy, SpaceDoc::Bergman(BergmanDoc { alpha: 0.0 })] {
            out.push(doc(
                format!("parabolic-not-normaloid/t={t}/{space:?}"),
                space,
                &phi,
                PsiDoc::constant(1.0),
                seed,
                &["normaloid:NOT_NORMALOID"],
            ));
        }
    }
    out
}

fn kernel_modulus(seed: u64) -> Vec<ScenarioDoc> {
    vec![
        doc(
            "kernel-modulus/a=-1/2".into(),
            HARDY,
            &hyperbolic(),
            PsiDoc::kernel(c64(-0.5, 0.0)),
            seed,
            &["kernel_modulus:CONSISTENT", "hyponormality:NORMAL_CONSISTENT"],
        ),
        doc(
            "kernel-modulus/a=0.2".into(),
            HARDY,
            &hyperbolic(),
            PsiDoc::kernel(c64(0.2, 0.0)),
            seed,
            &["kernel_modulus:VIOLATED", "kernel_normality:VIOLATED"],
        ),
    ]
}

fn parabolic_kernel_rule_out(seed: u64) -> Vec<ScenarioDoc> {
    let phi = LftMap::parabolic_from(c64(1.0, 0.0), c64(1.0, 0.0)).expect("valid map");
    [(0.2, "VIOLATED"), (1.0 / 3.0, "CONSISTENT"), (0.5, "VIOLATED")]
        .into_iter()
        .map(|(a, v)| {
            doc(
                format!("parabolic-kernel-rule-out/|a|={a:.4}"),
                HARDY,
                &phi,
                PsiDoc::kernel(c64(a, 0.0)),
                seed,
                &[&format!("parabolic_kernel:{v}")],
            )
        })
        .collect()
}

fn boundary_profile(seed: u64) -> Vec<ScenarioDoc> {
    let par = LftMap::parabolic_from(c64(1.0, 0.0), c64(0.0, 0.8)).expect("valid map");
    vec![
        doc(
            "boundary-profile/hyperbolic-normal".into(),
            HARDY,
            &hyperbolic(),
            normal_auto(c64(1.0, 0.0)),
            seed,
            &["boundary_profile:CONSISTENT"],
        ),
        doc(
            "boundary-profile/parabolic-normal".into(),
            SpaceDoc::Bergman(BergmanDoc { alpha: 0.0 }),
            &par,
            normal_auto(c64(1.0, 0.0)),
            seed,
            &["boundary_profile:CONSISTENT"],
        ),
        doc(
            "boundary-profile/a=0.2".into(),
            HARDY,
            &hyperbolic(),
            PsiDoc::kernel(c64(0.2, 0.0)),
            seed,
            &["boundary_profile:VIOLATED"],
        ),
    ]
}

fn perturbed(base: PsiDoc) -> PsiDoc {
    PsiDoc::Sum(TermsDoc { terms: vec![base, PsiDoc::Poly(CoeffsDoc { coeffs: vec![[0.0, 0.0], [0.1, 0.0]] })] })
}

fn eigen_weight(seed: u64) -> Vec<ScenarioDoc> {
    let par = LftMap::parabolic_from(c64(1.0, 0.0), c64(0.0, 0.8)).expect("valid map");
    vec![
        doc(
            "eigen-weight/hyperbolic".into(),
            HARDY,
            &hyperbolic(),
            normal_auto(c64(1.0, 0.0)),
            seed,
            &["eigen_weight:CONSISTENT"],
        ),
        doc(
            "eigen-weight/parabolic".into(),
            HARDY,
            &par,
            normal_auto(c64(1.0, 0.0)),
            seed,
            &["eigen_weight:CONSISTENT"],
        ),
        doc(
            "eigen-weight/perturbed".into(),
            HARDY,
            &hyperbolic(),
            perturbed(normal_auto(c64(1.0, 0.0))),
            seed,
            &["eigen_weight:VIOLATED"],
        ),
    ]
}

const NORMAL_CHECKS: [&str; 10] = [
    "kernel_adjoint:CONSISTENT",
    "hyponormality:NORMAL_CONSISTENT",
    "kernel_normality:CONSISTENT",
    "identity:CONSISTENT",
    "normaloid:NORMALOID_CONSISTENT",
    "kernel_modulus:CONSISTENT",
    "boundary_profile:CONSISTENT",
    "constant_weight:CONSTANT",
    "eigen_weight:CONSISTENT",
    "zero_free:ZERO_FREE",
];

/// Ten hyperbolic automorphisms with `|φ(0)| ≤ 0.6`, cycling through the
/// three spaces, and their `ψ(0)`.
fn hyperbolic_cases(seed: u64) -> Vec<(LftMap, SpaceDoc, Complex64)> {
    let mut r = rng(seed ^ 0x45a);
    (0..10)
        .map(|i| {
            let phi = random_hyperbolic_automorphism(&mut r, MAX_SHIFT);
            (phi, SPACES[i % 3].clone(), random_psi0(&mut r))
        })
        .collect()
}

/// `t = 0.8i` at `ζ = 1` on H², then nine random parabolic automorphisms.
fn parabolic_cases(seed: u64) -> Vec<(LftMap, SpaceDoc, Complex64)> {
    let mut r = rng(seed ^ 0x45b);
    let mut out = vec![(
        LftMap::parabolic_from(c64(1.0, 0.0), c64(0.0, 0.8)).expect("valid map"),
        SpaceDoc::Hardy,
        c64(1.0, 0.0),
    )];
    for i in 1..10 {
        let phi = random_parabolic_automorphism(&mut r, 0.3, PARABOLIC_Y_MAX);
        out.push((phi, SPACES[i % 3].clone(), random_psi0(&mut r)));
    }
    out
}

fn normal_hyperbolic(seed: u64) -> Vec<ScenarioDoc> {
    hyperbolic_cases(seed)
        .into_iter()
        .enumerate()
        .map(|(i, (phi, space, psi0))| {
            doc(format!("normal-hyperbolic/{i}"), space, &phi, normal_auto(psi0), seed + i as u64, &NORMAL_CHECKS)
        })
        .collect()
}

fn normal_parabolic(seed: u64) -> Vec<ScenarioDoc> {
    parabolic_cases(seed)
        .into_iter()
        .enumerate()
        .map(|(i, (phi, space, psi0))| {
            doc(format!("normal-parabolic/{i}"), space, &phi, normal_auto(psi0), seed + i as u64, &NORMAL_CHECKS)
        })
        .collect()
}

fn normal_perturbed(seed: u64) -> Vec<ScenarioDoc> {
    let checks = ["non_normality:DETECTED", "kernel_normality:VIOLATED", "identity:VIOLATED"];
    hyperbolic_cases(seed)
        .into_iter()
        .chain(parabolic_cases(seed))
        .enumerate()
        .map(|(i, (phi, space, psi0))| {
            doc(format!("normal-perturbed/{i}"), space, &phi, perturbed(normal_auto(psi0)), seed + i as u64, &checks)
        })
        .collect()
}

fn parabolic_constant_weight(seed: u64) -> Vec<ScenarioDoc> {
    let mut r = rng(seed ^ 0x47);
    let mut out = Vec::new();
    for (i, space) in SPACES.iter().enumerate() {
        let phi = random_parabolic_automorphism(&mut r, 0.3, PARABOLIC_Y_MAX);
        out.push(doc(
            format!("parabolic-constant-weight/normal/{i}"),
            space.clone(),
            &phi,
            normal_auto(random_psi0(&mut r)),
            seed,
            &["constant_weight:CONSTANT"],
        ));
    }
    let phi = LftMap::parabolic_from(c64(1.0, 0.0), c64(0.0, 0.8)).expect("valid map");
    out.push(doc(
        "parabolic-constant-weight/a=0.2".into(),
        HARDY,
        &phi,
        PsiDoc::kernel(c64(0.2, 0.0)),
        seed,
        &["constant_weight:NOT_CONSTANT"],
    ));
    out
}

fn orbit_chain(seed: u64) -> Vec<ScenarioDoc> {
    let mut r = rng(seed ^ 0x46);
    let mut out = Vec::new();
    for (i, space) in SPACES.iter().enumerate() {
        let hyp = random_hyperbolic_automorphism(&mut r, MAX_SHIFT);
        let par = random_parabolic_automorphism(&mut r, 0.3, PARABOLIC_Y_MAX);
        for (label, phi) in [("hyperbolic", hyp), ("parabolic", par)] {
            out.push(doc(
                format!("orbit-chain/{label}/{i}"),
                space.clone(),
                &phi,
                normal_auto(c64(1.0, 0.0)),
                seed,
                &["orbit_fixed_points:CONSISTENT", "weight_chain:CONSISTENT"],
            ));
        }
    }
    // A rotation by 2π/5 has finite orbits everywhere and is out of scope.
    let rotation = LftMap::scaling(unimodular_at(0.2)).expect("valid map");
    out.push(doc(
        "orbit-chain/elliptic".into(),
        HARDY,
        &rotation,
        PsiDoc::constant(1.0),
        seed,
        &["orbit_fixed_points:NOT_APPLICABLE"],
    ));
    out
}

fn unimodular_at(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * turns)
}

fn invertible_automorphism(seed: u64) -> Vec<ScenarioDoc> {
    vec![doc(
        "invertible-automorphism".into(),
        HARDY,
        &hyperbolic(),
        PsiDoc::constant(1.0),
        seed,
        &["bounded_below:BOUNDED_AWAY"],
    )]
}

fn not_bounded_below(seed: u64) -> Vec<ScenarioDoc> {
    let mut d = doc(
        "not-bounded-below".into(),
        HARDY,
        &LftMap::scaling(c64(0.5, 0.0)).expect("valid map"),
        PsiDoc::constant(1.0),
        seed,
        &["bounded_below:TENDS_TO_ZERO"],
    );
    // σ_min = 2^{1−N} drops below the eigensolver resolution long before N = 256.
    d.n = 32;
    d.m = 16;
    vec![d]
}

fn spectral_radius(seed: u64) -> Vec<ScenarioDoc> {
    vec![
        doc(
            "spectral-radius/psi=1".into(),
            HARDY,
            &hyperbolic(),
            PsiDoc::constant(1.0),
            seed,
            &["normaloid:NORMALOID_CONSISTENT"],
        ),
        doc(
            "spectral-radius/psi=K_-1/2".into(),
            HARDY,
            &hyperbolic(),
            PsiDoc::kernel(c64(-0.5, 0.0)),
            seed,
            &["normaloid:NORMALOID_CONSISTENT"],
        ),
    ]
}

fn zero_free(seed: u64) -> Vec<ScenarioDoc> {
    let mut r = rng(seed ^ 0x24);
    let mut out: Vec<ScenarioDoc> = (0..3)
        .map(|i| {
            let phi = random_hyperbolic_automorphism(&mut r, MAX_SHIFT);
            let psi0 = unimodular(&mut r);
            doc(
                format!("zero-free/normal/{i}"),
                SPACES[i].clone(),
                &phi,
                normal_auto(psi0),
                seed,
                &["zero_free:ZERO_FREE"],
            )
        })
        .collect();
    out.push(doc(
        "zero-free/z-1/4".into(),
        HARDY,
        &hyperbolic(),
        PsiDoc::Poly(CoeffsDoc { coeffs: vec![[-0.25, 0.0], [1.0, 0.0]] }),
        seed,
        &["zero_free:HAS_ZEROS"],
    ));
    out
}
