//! The boundary weight `w(z) = (1 − āz)^γ ψ(z)` for automorphic symbols
//! `φ = λ(a − z)/(1 − āz)`, and the explicit normal weight `ψ(0) K_{σ(0)}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::{DiagnosticsError, Verdict};
use crate::moebius::{LftMap, MapKind};
use crate::series::Space;
use crate::wco::{SymbolSpec, WcoSpec};

pub const DEFAULT_BOUNDARY_GRID: usize = 4096;
const CHAIN_LENGTH: usize = 16;
const GOLDEN_ITERS: usize = 60;

/// `w(z) = (1 − āz)^γ ψ(z)` where `a = φ^{-1}(0)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryWeight {
    pub a: Complex64,
    pub gamma: f64,
    pub psi: SymbolSpec,
    #[serde(skip)]
    space: Space,
}

impl BoundaryWeight {
    /// Requires an LFT automorphism and a space with a kernel exponent.
    pub fn new(op: &WcoSpec) -> Result<Self, DiagnosticsError> {
        let phi = automorphic_symbol(op)?;
        let gamma = op
            .space
            .gamma()
            .ok_or_else(|| DiagnosticsError::HypothesesNotMet("space has no kernel exponent".into()))?;
        let a = phi.invert().evaluate(Complex64::new(0.0, 0.0))?;
        Ok(BoundaryWeight { a, gamma, psi: op.psi.clone(), space: op.space.clone() })
    }

    /// Valid on the closed disk: `1 − āz` has positive real part there.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, DiagnosticsError> {
        let factor = (Complex64::new(1.0, 0.0) - self.a.conj() * z).powf(self.gamma);
        Ok(factor * self.psi.evaluate(&self.space, z)?)
    }

    fn modulus_at_angle(&self, theta: f64) -> f64 {
        self.evaluate(Complex64::from_polar(1.0, theta)).map(|v| v.norm()).unwrap_or(f64::NAN)
    }
}

fn automorphic_symbol(op: &WcoSpec) -> Result<&LftMap, DiagnosticsError> {
    let phi =
        op.phi.as_lft().ok_or_else(|| DiagnosticsError::HypothesesNotMet("phi is not linear-fractional".into()))?;
    if !phi.is_automorphism() {
        return Err(DiagnosticsError::NotAutomorphism);
    }
    Ok(phi)
}

/// Golden-section search for an extremum of `f` on `[lo, hi]`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, maximize: bool) -> f64 {
    let g = |x: f64| if maximize { -f(x) } else { f(x) };
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = g(x2);
        }
    }
    0.5 * (lo + hi)
}

fn circle_distance(a: Complex64, b: Complex64) -> f64 {
    // Arc length between two unimodular points.
    (a * b.conj()).arg().abs()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryProfile {
    pub grid_size: usize,
    pub a: Complex64,
    /// `min_ζ |w(ζ)| − |w(φ(ζ))|`; `≥ 0` is necessary for hyponormality.
    pub min_forward: f64,
    /// `max_ζ |w(ζ)| − |w(φ(ζ))|`; `≤ 0` is necessary for cohyponormality.
    pub max_forward: f64,
    pub max_abs_difference: f64,
    pub hyponormal_condition: Verdict,
    pub cohyponormal_condition: Verdict,
    pub min_modulus: f64,
    pub max_modulus: f64,
    /// Refined minimizer `ζ₁` and maximizer `ζ₂` of `|w|` on the circle.
    pub argmin: Complex64,
    pub argmax: Complex64,
    pub fixed_points: Vec<Complex64>,
    /// Hyperbolic case: both extrema lie within one grid step of fixed points.
    pub extrema_at_fixed_points: Option<bool>,
    /// `|w|` constant on the circle up to the tolerance (relative).
    pub constant_modulus: bool,
    /// Fraction of grid nodes in the level sets of the minimum and maximum.
    pub level_set_fraction_min: f64,
    pub level_set_fraction_max: f64,
    /// `|w(φ_n(ζ₂))|` for `n = 0..16`.
    pub weight_chain: Vec<f64>,
    /// The chain is nondecreasing up to the tolerance.
    pub chain_nondecreasing: bool,
}

/// Sample `|w|` and `|w ∘ φ|` on a uniform boundary grid and summarize the
/// necessary conditions for (co)hyponormality.
pub fn boundary_weight_profile(op: &WcoSpec, grid_size: usize, tol: f64) -> Result<BoundaryProfile, DiagnosticsError> {
    if grid_size < 8 {
        return Err(DiagnosticsError::InvalidArgument("boundary grid needs at least 8 nodes".into()));
    }
    let phi = automorphic_symbol(op)?;
    let bw = BoundaryWeight::new(op)?;
    let step = TAU / grid_size as f64;
    let mut moduli = Vec::with_capacity(grid_size);
    let mut diffs = Vec::with_capacity(grid_size);
    for k in 0..grid_size {
        let zeta = Complex64::from_polar(1.0, k as f64 * step);
        let wz = bw.evaluate(zeta)?.norm();
        let image = phi.evaluate(zeta)?;
        let image = image / image.norm();
        let wp = bw.evaluate(image)?.norm();
        moduli.push(wz);
        diffs.push(wz - wp);
    }
    let min_forward = diffs.iter().copied().fold(f64::INFINITY, f64::min);
    let max_forward = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (kmin, _) = moduli.iter().enumerate().fold((0, f64::INFINITY), |b, (k, &m)| if m < b.1 { (k, m) } else { b });
    let (kmax, _) =
        moduli.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (k, &m)| if m > b.1 { (k, m) } else { b });
    let refine = |k: usize, maximize: bool| {
        let c = k as f64 * step;
        golden_section(|t| bw.modulus_at_angle(t), c - step, c + step, maximize)
    };
    let theta_min = refine(kmin, false);
    let theta_max = refine(kmax, true);
    let argmin = Complex64::from_polar(1.0, theta_min);
    let argmax = Complex64::from_polar(1.0, theta_max);
    let min_modulus = bw.modulus_at_angle(theta_min).min(moduli[kmin]);
    let max_modulus = bw.modulus_at_angle(theta_max).max(moduli[kmax]);

    let scale = max_modulus.max(f64::MIN_POSITIVE);
    let constant_modulus = max_modulus - min_modulus <= tol * scale.max(1.0);
    let level = |target: f64| {
        moduli.iter().filter(|m| (**m - target).abs() <= tol * scale.max(1.0)).count() as f64 / grid_size as f64
    };

    let class = phi.classify()?;
    let fixed_points = class.boundary_fixed_points();
    let extrema_at_fixed_points = (class.kind == MapKind::HyperbolicAutomorphism).then(|| {
        let near = |z: Complex64| fixed_points.iter().any(|p| circle_distance(z, *p) <= step);
        near(argmin) && near(argmax)
    });

    let mut weight_chain = Vec::with_capacity(CHAIN_LENGTH + 1);
    let mut z = argmax;
    for _ in 0..=CHAIN_LENGTH {
        weight_chain.push(bw.evaluate(z)?.norm());
        let next = phi.evaluate(z)?;
        z = next / next.norm();
    }
    let chain_nondecreasing = weight_chain.windows(2).all(|p| p[1] >= p[0] - tol * scale.max(1.0));

    Ok(BoundaryProfile {
        grid_size,
        a: bw.a,
        min_forward,
        max_forward,
        max_abs_difference: min_forward.abs().max(max_forward.abs()),
        hyponormal_condition: Verdict::from_holds(min_forward >= -tol),
        cohyponormal_condition: Verdict::from_holds(max_forward <= tol),
        min_modulus,
        max_modulus,
        argmin,
        argmax,
        fixed_points,
        extrema_at_fixed_points,
        constant_modulus,
        level_set_fraction_min: level(min_modulus),
        level_set_fraction_max: level(max_modulus),
        weight_chain,
        chain_nondecreasing,
    })
}

const EIGEN_RADII: [f64; 3] = [0.0, 0.45, 0.9];
const EIGEN_ANGLES: usize = 256;

/// `sup |w(φ(z)) − w(z)|` over an interior grid; near zero is necessary for
/// normality (the weight must be a fixed vector of `C_φ`).
pub fn eigen_weight_check(op: &WcoSpec) -> Result<f64, DiagnosticsError> {
    let phi = automorphic_symbol(op)?;
    let kind = phi.classify()?.kind;
    if matches!(kind, MapKind::Identity | MapKind::EllipticAutomorphism) {
        return Err(DiagnosticsError::NotApplicable(format!("{kind:?} symbol")));
    }
    let bw = BoundaryWeight::new(op)?;
    let mut sup = 0.0_f64;
    for r in EIGEN_RADII {
        let count = if r == 0.0 { 1 } else { EIGEN_ANGLES };
        for k in 0..count {
            let z = Complex64::from_polar(r, TAU * k as f64 / count as f64);
            sup = sup.max((bw.evaluate(phi.evaluate(z)?)? - bw.evaluate(z)?).norm());
        }
    }
    Ok(sup)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalSymbol {
    pub psi: SymbolSpec,
    pub sigma0: Complex64,
    pub gamma: f64,
    /// `sup |ψ·(g∘φ) − ψ(0)‖K_{σ(0)}‖²|` over an interior grid.
    pub identity_residual: f64,
}

const IDENTITY_RADII: [f64; 4] = [0.0, 0.3, 0.6, 0.9];
const IDENTITY_ANGLES: usize = 64;

/// `ψ = ψ0 · K_{σ(0)}` for a hyperbolic or parabolic automorphism, with the
/// residual of `ψ·(g∘φ) = ψ0 ‖K_{σ(0)}‖²`.
///
/// Here `ψ0` scales the normalized kernel, which has `K_{σ(0)}(0) = 1`, so it
/// is also the value `ψ(0)`.
pub fn normal_symbol_for(phi: &LftMap, psi0: Complex64, space: &Space) -> Result<NormalSymbol, DiagnosticsError> {
    let kind = phi.classify()?.kind;
    if !matches!(kind, MapKind::HyperbolicAutomorphism | MapKind::ParabolicAutomorphism) {
        return Err(DiagnosticsError::WrongMapClass(kind));
    }
    if psi0 == Complex64::new(0.0, 0.0) || !psi0.is_finite() {
        return Err(DiagnosticsError::InvalidArgument("psi(0) must be finite and nonzero".into()));
    }
    let gamma =
        space.gamma().ok_or_else(|| DiagnosticsError::HypothesesNotMet("space has no kernel exponent".into()))?;
    let sigma0 = phi.adjoint_symbols(gamma)?.sigma.evaluate(Complex64::new(0.0, 0.0))?;
    let psi = SymbolSpec::scaled_kernel(psi0, sigma0);
    let residual = residual_on_grid(&psi, phi, space, gamma)?;
    Ok(NormalSymbol { psi, sigma0, gamma, identity_residual: residual })
}

/// `sup |ψ·(g∘φ) − ψ(0)‖K_{σ(0)}‖²|` over an interior grid for the operator's
/// own `ψ`; zero exactly when `ψ` is the normal weight of `φ`.
pub fn identity_residual(op: &WcoSpec) -> Result<f64, DiagnosticsError> {
    let phi = automorphic_symbol(op)?;
    let kind = phi.classify()?.kind;
    if !matches!(kind, MapKind::HyperbolicAutomorphism | MapKind::ParabolicAutomorphism) {
        return Err(DiagnosticsError::WrongMapClass(kind));
    }
    let gamma =
        op.space.gamma().ok_or_else(|| DiagnosticsError::HypothesesNotMet("space has no kernel exponent".into()))?;
    residual_on_grid(&op.psi, phi, &op.space, gamma)
}

fn residual_on_grid(psi: &SymbolSpec, phi: &LftMap, space: &Space, gamma: f64) -> Result<f64, DiagnosticsError> {
    let symbols = phi.adjoint_symbols(gamma)?;
    let sigma0 = symbols.sigma.evaluate(Complex64::new(0.0, 0.0))?;
    let target = psi.evaluate(space, Complex64::new(0.0, 0.0))? * space.kernel_norm(sigma0)?.powi(2);
    let mut residual = 0.0_f64;
    for r in IDENTITY_RADII {
        let count = if r == 0.0 { 1 } else { IDENTITY_ANGLES };
        for k in 0..count {
            let z = Complex64::from_polar(r, TAU * k as f64 / count as f64);
            let lhs = psi.evaluate(space, z)? * symbols.g.evaluate(phi.evaluate(z)?);
            residual = residual.max((lhs - target).norm());
        }
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    fn hyperbolic() -> LftMap {
        LftMap::real(1.0, 0.5, 0.5, 1.0).unwrap()
    }

    #[test]
    fn normal_weight_profile_is_flat() {
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), hyperbolic(), Space::Hardy).unwrap();
        let p = boundary_weight_profile(&op, DEFAULT_BOUNDARY_GRID, 1e-9).unwrap();
        assert!(p.constant_modulus && p.max_abs_difference <= 1e-12);
        assert_eq!((p.hyponormal_condition, p.cohyponormal_condition), (Verdict::Consistent, Verdict::Consistent));
        assert!(eigen_weight_check(&op).unwrap() < 1e-14);
    }

    #[test]
    fn constant_weight_is_flat_only_for_rotations() {
        let rot = LftMap::scaling(c64(0.0, 1.0)).unwrap();
        let op = WcoSpec::lft(SymbolSpec::one(), rot, Space::Hardy).unwrap();
        assert!(boundary_weight_profile(&op, 512, 1e-9).unwrap().constant_modulus);
        let op = WcoSpec::lft(SymbolSpec::one(), hyperbolic(), Space::Hardy).unwrap();
        assert!(!boundary_weight_profile(&op, 512, 1e-9).unwrap().constant_modulus);
    }

    #[test]
    fn profile_requires_automorphism() {
        let op = WcoSpec::lft(SymbolSpec::one(), LftMap::scaling(c64(0.5, 0.0)).unwrap(), Space::Hardy).unwrap();
        assert_eq!(boundary_weight_profile(&op, 64, 1e-9).unwrap_err(), DiagnosticsError::NotAutomorphism);
    }

    #[test]
    fn eigen_weight_detects_non_fixed_weight() {
        let op = WcoSpec::lft(SymbolSpec::polynomial(&[ONE, ONE]), hyperbolic(), Space::Hardy).unwrap();
        assert!(eigen_weight_check(&op).unwrap() >= 0.05);
        let rot = LftMap::scaling(c64(0.0, 1.0)).unwrap();
        let op = WcoSpec::lft(SymbolSpec::one(), rot, Space::Hardy).unwrap();
        assert!(matches!(eigen_weight_check(&op), Err(DiagnosticsError::NotApplicable(_))));
    }

    #[test]
    fn normal_symbol_examples() {
        let n = normal_symbol_for(&hyperbolic(), ONE, &Space::Hardy).unwrap();
        assert!((n.sigma0 - c64(-0.5, 0.0)).norm() < 1e-15);
        assert!(n.identity_residual <= 1e-10);
        let par = LftMap::parabolic_from(ONE, c64(0.0, 2.0)).unwrap();
        let n = normal_symbol_for(&par, ONE, &Space::Hardy).unwrap();
        assert!((n.sigma0 - c64(0.5, -0.5)).norm() < 1e-14);
        assert!((n.sigma0.norm() - 0.5f64.sqrt()).abs() < 1e-14);
        let op = WcoSpec::lft(n.psi.clone(), par, Space::Hardy).unwrap();
        assert!(eigen_weight_check(&op).unwrap() <= 1e-10);
        let n = normal_symbol_for(&hyperbolic(), ONE, &Space::Bergman { alpha: 0.0 }).unwrap();
        assert_eq!(n.gamma, 2.0);
        assert!(n.identity_residual <= 1e-10);
        let rot = LftMap::scaling(c64(0.0, 1.0)).unwrap();
        assert!(matches!(normal_symbol_for(&rot, ONE, &Space::Hardy), Err(DiagnosticsError::WrongMapClass(_))));
    }
}
