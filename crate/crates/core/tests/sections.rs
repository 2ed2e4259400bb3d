use std::f64::consts::PI;

use wcolab::diagnostics::{
    diagnose, hyponormality_verdict, normal_symbol_for, spectral_radius_gelfand, DiagnoseConfig, Tolerances,
};
use wcolab::linalg::CMatrix;
use wcolab::sampling::{disk_points, random_self_map, rng};
use wcolab::{c64, Exec, LftMap, Space, SymbolSpec, WcoSpec};

/// Gauss–Legendre rule on `[0, 1]` by Newton iteration on `P_n`.
fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
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
            (0.5 * (x + 1.0), 1.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

#[test]
fn bergman_weights_match_radial_quadrature() {
    // ‖zⁿ‖² = 2(α+1) ∫₀¹ r^{2n+1} (1−r²)^α dr; with 1 − r² = s² the integrand
    // 2(α+1)(1−s²)ⁿ s^{2α+1} is smooth for these α.
    let rule = gauss_legendre_unit(48);
    for alpha in [0.0, 0.5, 1.5] {
        let space = Space::Bergman { alpha };
        for n in 0..=32 {
            let sq: f64 = rule
                .iter()
                .map(|(s, w)| w * 2.0 * (alpha + 1.0) * (1.0 - s * s).powi(n as i32) * s.powf(2.0 * alpha + 1.0))
                .sum();
            let beta = space.beta_norm(n).unwrap();
            assert!((beta - sq.sqrt()).abs() < 1e-10, "alpha {alpha} n {n}: {beta} vs {}", sq.sqrt());
        }
    }
}

#[test]
fn kernel_adjoint_residual_decreases_with_order() {
    let phi = LftMap::real(1.0, 1.0, -1.0, 3.0).unwrap();
    let op = WcoSpec::lft(SymbolSpec::kernel(c64(0.3, -0.2)), phi, Space::Bergman { alpha: 1.0 }).unwrap();
    let w = c64(0.45, 0.35);
    let residuals: Vec<f64> = [16, 32, 64, 128, 256]
        .iter()
        .map(|&n| op.kernel_adjoint_residual(&op.truncate(n, Exec::default()).unwrap(), w).unwrap())
        .collect();
    // Decreasing until rounding takes over.
    assert!(residuals.windows(2).all(|r| r[1] < r[0] || r[1] < 1e-13), "{residuals:?}");
    assert!(residuals[0] > 1e-5 && residuals[4] < 1e-13, "{residuals:?}");
}

#[test]
fn sequential_and_parallel_sections_agree() {
    let mut r = rng(3);
    for space in [Space::Hardy, Space::Bergman { alpha: 0.5 }] {
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(0.2, 0.1)), random_self_map(&mut r), space).unwrap();
        let a = op.truncate(96, Exec::Sequential).unwrap();
        let b = op.truncate(96, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let p = a.matrix.matmul(&a.matrix, Exec::Sequential).unwrap();
        let q = a.matrix.matmul(&a.matrix, Exec::Parallel).unwrap();
        assert!(p.sub(&q).unwrap().max_abs() <= 1e-13 * p.max_abs().max(1.0));
    }
}

#[test]
fn gelfand_estimate_on_a_diagonal_matrix() {
    let d: Vec<_> = (0..20).map(|k| c64(0.5 + 0.02 * k as f64, 0.0)).collect();
    let g = spectral_radius_gelfand(&CMatrix::from_diagonal(&d), 32, Exec::default()).unwrap();
    assert!((g.value - 0.88).abs() < 1e-9, "{}", g.value);
}

#[test]
fn normal_weight_separates_from_perturbation() {
    let phi = LftMap::real(1.0, 0.5, 0.5, 1.0).unwrap();
    for space in [Space::Hardy, Space::Bergman { alpha: 0.0 }] {
        let ns = normal_symbol_for(&phi, c64(1.0, 0.0), &space).unwrap();
        let op = WcoSpec::lft(ns.psi.clone(), phi, space).unwrap();
        let h = hyponormality_verdict(&op, 128, 32, 1e-6, Exec::default()).unwrap();
        assert!(h.class.is_normal(), "{h:?}");
        let bumped = op.with_psi(ns.psi.plus(SymbolSpec::polynomial(&[c64(0.0, 0.0), c64(0.1, 0.0)]))).unwrap();
        let h = hyponormality_verdict(&bumped, 128, 32, 1e-6, Exec::default()).unwrap();
        assert!(!h.class.is_normal(), "{h:?}");
    }
}

#[test]
fn defect_report_is_deterministic() {
    let phi = LftMap::real(1.0, 1.0, -1.0, 3.0).unwrap();
    let op = WcoSpec::lft(SymbolSpec::one(), phi, Space::Hardy).unwrap();
    let cfg = DiagnoseConfig {
        n: 64,
        m: 16,
        k_max: 16,
        pairs: 10,
        pair_radius: 0.6,
        seed: 11,
        tol: Tolerances::default(),
        exec: Exec::default(),
    };
    let a = diagnose(&op, &cfg).unwrap();
    let mut b = diagnose(&op, &DiagnoseConfig { exec: Exec::Sequential, ..cfg.clone() }).unwrap();
    b.config.exec = a.config.exec;
    assert_eq!(a, b);
    assert_eq!(disk_points(5, 0.6, 11), disk_points(5, 0.6, 11));
}
