//! Spectral radius: the closed form for LFT symbols with a boundary
//! Denjoy–Wolff point, a Gelfand-formula estimate on finite sections, and the
//! normaloid verdict built from both.

use num_complex::Complex64;
use serde::Serialize;

use super::{DiagnosticsError, Tolerances};
use crate::linalg::{CMatrix, PowerIteration};
use crate::moebius::MapKind;
use crate::par::Exec;
use crate::wco::WcoSpec;

/// `|ψ(ζ)| φ′(ζ)^{−γ/2}` for an LFT self-map whose Denjoy–Wolff point `ζ`
/// lies on the circle.
pub fn spectral_radius_closed(op: &WcoSpec) -> Result<f64, DiagnosticsError> {
    let phi =
        op.phi.as_lft().ok_or_else(|| DiagnosticsError::HypothesesNotMet("phi is not linear-fractional".into()))?;
    let gamma =
        op.space.gamma().ok_or_else(|| DiagnosticsError::HypothesesNotMet("space has no kernel exponent".into()))?;
    let class = phi.classify()?;
    let dw = match class.kind {
        MapKind::Identity | MapKind::EllipticAutomorphism => None,
        _ => class.boundary_denjoy_wolff(),
    }
    .ok_or_else(|| {
        DiagnosticsError::HypothesesNotMet(format!("{:?} has no boundary Denjoy-Wolff point", class.kind))
    })?;
    let psi_zeta = op.psi_at(dw.point)?;
    // Parabolic maps have φ′(ζ) = 1 exactly; avoid the rounding in evaluating it.
    let derivative = if class.is_parabolic() { 1.0 } else { dw.derivative.re };
    Ok(psi_zeta.norm() * derivative.powf(-gamma / 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GelfandEstimate {
    /// `‖T^k‖^{1/k}` for `k = 1..=k_max`.
    pub sequence: Vec<f64>,
    pub value: f64,
    /// Some power iteration hit its cap before converging; the values are
    /// still lower bounds on the norms.
    pub stalled: bool,
}

const GELFAND_POWER: PowerIteration = PowerIteration { max_iter: 400, rel_tol: 1e-10 };

/// Gelfand-formula estimate for a square section. Powers are formed by
/// repeated multiplication; each norm is a power iteration warm-started from
/// the previous singular vector.
pub fn spectral_radius_gelfand(t: &CMatrix, k_max: usize, exec: Exec) -> Result<GelfandEstimate, DiagnosticsError> {
    if k_max == 0 {
        return Err(DiagnosticsError::InvalidArgument("k_max must be at least 1".into()));
    }
    if !t.is_square() {
        return Err(crate::linalg::LinalgError::NotSquare { rows: t.rows(), cols: t.cols() }.into());
    }
    let mut sequence = Vec::with_capacity(k_max);
    let mut power = t.clone();
    let mut start: Option<Vec<Complex64>> = None;
    let mut stalled = false;
    for k in 1..=k_max {
        if k > 1 {
            power = power.matmul(t, exec)?;
        }
        let est = power.spectral_norm_from(start.as_deref(), &GELFAND_POWER);
        stalled |= !est.converged;
        sequence.push(est.value.powf(1.0 / k as f64));
        start = Some(est.vector);
    }
    let value = *sequence.last().expect("k_max >= 1");
    Ok(GelfandEstimate { sequence, value, stalled })
}

/// Sample points for the kernel norm bound: the origin, the kernel point of
/// `ψ` when it is one, and radial points towards the Denjoy–Wolff point.
pub fn default_norm_samples(op: &WcoSpec) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    if let Some((_, a)) = op.psi.as_kernel() {
        if a != out[0] {
            out.push(a);
        }
    }
    let zeta = op
        .phi
        .as_lft()
        .and_then(|m| m.classify().ok())
        .and_then(|c| c.boundary_denjoy_wolff())
        .map(|dw| dw.point)
        .unwrap_or(Complex64::new(1.0, 0.0));
    for r in [0.5, 0.9, 0.99, 0.999] {
        out.push(zeta * r);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NormaloidClass {
    NormaloidConsistent,
    NotNormaloid,
    /// Only a finite-section radius was available and it sits below the norm
    /// bound; nothing can be certified either way.
    Inconclusive,
}

impl NormaloidClass {
    pub fn as_str(self) -> &'static str {
        match self {
            NormaloidClass::NormaloidConsistent => "NORMALOID_CONSISTENT",
            NormaloidClass::NotNormaloid => "NOT_NORMALOID",
            NormaloidClass::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormaloidReport {
    pub class: NormaloidClass,
    pub norm_lower_bound: f64,
    pub radius_closed: Option<f64>,
    pub radius_gelfand: Option<GelfandEstimate>,
    /// Radius the bound was compared against.
    pub radius_used: f64,
    /// `norm_lower_bound / radius_used − 1`; positive means the bound exceeds
    /// the radius.
    pub relative_excess: f64,
    /// Whether the verdict is certified by exact formulas.
    pub certified: bool,
}

/// With the closed-form radius `r`, `‖C‖ ≥ bound > r(1 + tol)` certifies that
/// the operator is not normaloid. Without it, only a Gelfand estimate on the
/// `n × n` section is available and at most weak consistency can be claimed.
pub fn normaloid_verdict(
    op: &WcoSpec,
    samples: &[Complex64],
    n: usize,
    k_max: usize,
    tol: &Tolerances,
    exec: Exec,
) -> Result<NormaloidReport, DiagnosticsError> {
    let bound = op.norm_lower_bound(samples)?;
    match spectral_radius_closed(op) {
        Ok(r) => {
            let excess = bound / r - 1.0;
            let class =
                if excess > tol.geometric { NormaloidClass::NotNormaloid } else { NormaloidClass::NormaloidConsistent };
            Ok(NormaloidReport {
                class,
                norm_lower_bound: bound,
                radius_closed: Some(r),
                radius_gelfand: None,
                radius_used: r,
                relative_excess: excess,
                certified: class == NormaloidClass::NotNormaloid,
            })
        }
        Err(e) if e.is_not_applicable() => {
            let t = op.truncate(n, exec)?;
            let g = spectral_radius_gelfand(&t.matrix, k_max, exec)?;
            let r = g.value;
            let excess = if r > 0.0 { bound / r - 1.0 } else { f64::INFINITY };
            let class =
                if excess <= tol.gelfand { NormaloidClass::NormaloidConsistent } else { NormaloidClass::Inconclusive };
            Ok(NormaloidReport {
                class,
                norm_lower_bound: bound,
                radius_closed: None,
                radius_gelfand: Some(g),
                radius_used: r,
                relative_excess: excess,
                certified: false,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::moebius::LftMap;
    use crate::series::Space;
    use crate::wco::SymbolSpec;

    fn hyperbolic() -> LftMap {
        LftMap::real(1.0, 0.5, 0.5, 1.0).unwrap()
    }

    fn parabolic() -> LftMap {
        LftMap::real(1.0, 1.0, -1.0, 3.0).unwrap()
    }

    #[test]
    fn closed_radius_examples() {
        let one = SymbolSpec::one();
        let op = WcoSpec::lft(one.clone(), parabolic(), Space::Hardy).unwrap();
        assert!((spectral_radius_closed(&op).unwrap() - 1.0).abs() < 1e-12);
        let op = WcoSpec::lft(one.clone(), hyperbolic(), Space::Hardy).unwrap();
        assert!((spectral_radius_closed(&op).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), hyperbolic(), Space::Hardy).unwrap();
        assert!((spectral_radius_closed(&op).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        let op = WcoSpec::lft(one, LftMap::scaling(c64(0.5, 0.0)).unwrap(), Space::Hardy).unwrap();
        assert!(matches!(spectral_radius_closed(&op), Err(DiagnosticsError::HypothesesNotMet(_))));
    }

    #[test]
    fn gelfand_examples() {
        let d = CMatrix::from_diagonal(&(0..8).map(|j| c64(0.5f64.powi(j), 0.0)).collect::<Vec<_>>());
        let g = spectral_radius_gelfand(&d, 6, Exec::Sequential).unwrap();
        assert!(g.sequence.iter().all(|v| (v - 1.0).abs() < 1e-10));
        let nil = CMatrix::from_fn(2, 2, |i, j| if i == 0 && j == 1 { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let g = spectral_radius_gelfand(&nil, 2, Exec::Sequential).unwrap();
        assert!((g.sequence[0] - 1.0).abs() < 1e-12);
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn normaloid_examples() {
        let tol = Tolerances::default();
        let op = WcoSpec::lft(SymbolSpec::one(), parabolic(), Space::Hardy).unwrap();
        let r = normaloid_verdict(&op, &[c64(0.0, 0.0)], 64, 8, &tol, Exec::Parallel).unwrap();
        assert_eq!(r.class, NormaloidClass::NotNormaloid);
        assert!((r.norm_lower_bound - 3.0 / (2.0 * 2f64.sqrt())).abs() < 1e-14);
        let op = WcoSpec::lft(SymbolSpec::one(), LftMap::scaling(c64(0.6, 0.0)).unwrap(), Space::Hardy).unwrap();
        let r = normaloid_verdict(&op, &default_norm_samples(&op), 64, 8, &tol, Exec::Parallel).unwrap();
        assert_eq!(r.class, NormaloidClass::NormaloidConsistent);
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), hyperbolic(), Space::Hardy).unwrap();
        let r = normaloid_verdict(&op, &default_norm_samples(&op), 64, 8, &tol, Exec::Parallel).unwrap();
        assert_eq!(r.class, NormaloidClass::NormaloidConsistent);
        assert!(r.relative_excess.abs() < 0.02);
    }
}
