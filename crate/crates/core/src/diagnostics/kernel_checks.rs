//! Checks driven by reproducing kernels: the kernel normality defect and the
//! closed-form necessary conditions for `ψ = c·K_a`.

use num_complex::Complex64;
use serde::Serialize;

use super::{DiagnosticsError, HyponormalityClass, Verdict};
use crate::moebius::MapKind;
use crate::par::Exec;
use crate::series::{PowerSeries, RationalPower, SeriesError};
use crate::wco::{SelfMap, WcoSpec};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Relative size of the neglected inner-product tail that is still accepted.
const DEFECT_TAIL_TOL: f64 = 1e-9;

/// Taylor series of `K_w ∘ φ` to `order`. For LFT symbols on spaces with a
/// kernel exponent this is the exact rational power
/// `((d − w̄b) + (c − w̄a)z)/(d + cz))^{−γ}`.
pub fn composed_kernel_series(op: &WcoSpec, w: Complex64, order: usize) -> Result<PowerSeries, DiagnosticsError> {
    if !(w.norm() < 1.0) {
        return Err(SeriesError::PointNotInDisk(w).into());
    }
    let wc = w.conj();
    match (&op.phi, op.space.gamma()) {
        (SelfMap::Lft(m), Some(gamma)) => {
            let [a, b, c, d] = m.coeffs();
            let r = RationalPower { p: d - wc * b, q: c - wc * a, u: d, v: c, s: -gamma };
            Ok(r.series(order)?)
        }
        (phi, Some(gamma)) => {
            let base = PowerSeries::constant(ONE, order).sub(&phi.series(order).scale(wc));
            Ok(base.powf(-gamma)?)
        }
        (phi, None) => {
            let k = op.space.kernel_series(w, order)?;
            Ok(k.compose_poly(&phi.series(order), order))
        }
    }
}

fn image_of_kernel(op: &WcoSpec, w: Complex64, order: usize) -> Result<PowerSeries, DiagnosticsError> {
    let psi = op.psi.series(&op.space, order)?;
    Ok(psi.multiply(&composed_kernel_series(op, w, order)?))
}

fn inner_with_tail(op: &WcoSpec, f: &PowerSeries, g: &PowerSeries) -> Result<Complex64, DiagnosticsError> {
    let n = f.order().min(g.order());
    let betas = op.space.betas(n)?;
    let terms: Vec<Complex64> = (0..=n).map(|j| f.coeff(j) * g.coeff(j).conj() * (betas[j] * betas[j])).collect();
    let value: Complex64 = terms.iter().sum();
    let tail = block_tail(&terms);
    let tol = DEFECT_TAIL_TOL * value.norm().max(1.0);
    if !(tail <= tol) {
        return Err(SeriesError::TailTooLarge { bound: tail, tol }.into());
    }
    Ok(value)
}

/// Geometric tail estimate for a sum of terms: compares the largest term of
/// the last block of sixteen with that of the block before it. Oscillating
/// terms make single-step ratios meaningless, block maxima do not.
fn block_tail(terms: &[Complex64]) -> f64 {
    const B: usize = 16;
    let n = terms.len();
    let block_max = |r: std::ops::Range<usize>| terms[r].iter().map(|t| t.norm()).fold(0.0_f64, f64::max);
    if n < 2 * B {
        return if block_max(n / 2..n) == 0.0 { 0.0 } else { f64::INFINITY };
    }
    let m2 = block_max(n - B..n);
    if m2 == 0.0 {
        return 0.0;
    }
    let m1 = block_max(n - 2 * B..n - B);
    let ratio = (m2 / m1).powf(1.0 / B as f64);
    if !(ratio < 1.0) {
        return f64::INFINITY;
    }
    m2 * ratio / (1.0 - ratio)
}

fn adjoint_side(op: &WcoSpec, w: Complex64, v: Complex64) -> Result<Complex64, DiagnosticsError> {
    let pw = op.phi_at(w)?;
    let pv = op.phi_at(v)?;
    Ok(op.psi_at(w)?.conj() * op.psi_at(v)? * op.space.kernel_value(pw, pv)?)
}

/// `⟨CK_w, CK_v⟩ − conj(ψ(w)) ψ(v) K_{φ(w)}(φ(v))`. The first term comes from
/// truncated series at `order`, the second is closed-form. Vanishes for all
/// pairs exactly when the operator is normal.
pub fn normality_defect_kernel(
    op: &WcoSpec,
    w: Complex64,
    v: Complex64,
    order: usize,
) -> Result<Complex64, DiagnosticsError> {
    let fw = image_of_kernel(op, w, order)?;
    let fv = if v == w { fw.clone() } else { image_of_kernel(op, v, order)? };
    Ok(inner_with_tail(op, &fw, &fv)? - adjoint_side(op, w, v)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelDefectSummary {
    pub max: f64,
    pub argmax: (Complex64, Complex64),
    pub defects: Vec<f64>,
}

/// Maximum `|defect(w, v)|` over the pairs; the kernel images are computed
/// once per distinct point, in parallel.
pub fn kernel_defect_max(
    op: &WcoSpec,
    pairs: &[(Complex64, Complex64)],
    order: usize,
    exec: Exec,
) -> Result<KernelDefectSummary, DiagnosticsError> {
    if pairs.is_empty() {
        return Err(DiagnosticsError::InvalidArgument("no sample pairs".into()));
    }
    let points: Vec<Complex64> = pairs.iter().flat_map(|(w, v)| [*w, *v]).collect();
    let images =
        exec.map_slice(&points, |z| image_of_kernel(op, *z, order)).into_iter().collect::<Result<Vec<_>, _>>()?;
    let defects = exec
        .map(pairs.len(), |k| {
            let (w, v) = pairs[k];
            Ok::<f64, DiagnosticsError>(
                (inner_with_tail(op, &images[2 * k], &images[2 * k + 1])? - adjoint_side(op, w, v)?).norm(),
            )
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let (k, max) =
        defects
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    Ok(KernelDefectSummary { max, argmax: pairs[k], defects })
}

fn kernel_point(op: &WcoSpec) -> Result<Complex64, DiagnosticsError> {
    op.psi
        .as_kernel()
        .map(|(_, a)| a)
        .ok_or_else(|| DiagnosticsError::HypothesesNotMet("psi is not a scaled reproducing kernel".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormaloidInequality {
    pub verdict: Verdict,
    /// `(1 − |φ(a)|²)(1 + |a|)/(1 − |a|)`
    pub lhs: f64,
    /// `φ′(ζ)`
    pub rhs: f64,
    /// When `φ′(ζ) = 1`: `(2|a|, |φ(a)|²(1 + |a|))`, which must satisfy `≥`.
    pub parabolic_sides: Option<(f64, f64)>,
}

/// Necessary condition for a normaloid `C_{K_a, φ}` when `φ` has a boundary
/// Denjoy–Wolff point; `VIOLATED` certifies "not normaloid".
pub fn normaloid_inequality_check(op: &WcoSpec, tol: f64) -> Result<NormaloidInequality, DiagnosticsError> {
    let a = kernel_point(op)?;
    let phi =
        op.phi.as_lft().ok_or_else(|| DiagnosticsError::HypothesesNotMet("phi is not linear-fractional".into()))?;
    let class = phi.classify()?;
    let dw = match class.kind {
        MapKind::Identity | MapKind::EllipticAutomorphism => None,
        _ => class.boundary_denjoy_wolff(),
    };
    let Some(dw) = dw else {
        return Ok(NormaloidInequality {
            verdict: Verdict::NotApplicable,
            lhs: f64::NAN,
            rhs: f64::NAN,
            parabolic_sides: None,
        });
    };
    let ra = a.norm();
    let pa = phi.evaluate(a)?.norm();
    let lhs = (1.0 - pa * pa) * (1.0 + ra) / (1.0 - ra);
    let rhs = dw.derivative.re;
    let mut holds = lhs >= rhs - tol * rhs.abs().max(1.0);
    let parabolic_sides = if (rhs - 1.0).abs() <= tol {
        let sides = (2.0 * ra, pa * pa * (1.0 + ra));
        holds &= sides.0 >= sides.1 - tol;
        Some(sides)
    } else {
        None
    };
    Ok(NormaloidInequality { verdict: Verdict::from_holds(holds), lhs, rhs, parabolic_sides })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelModulusReport {
    pub phi0_modulus: f64,
    pub a_modulus: f64,
    /// `|φ(0)| − |a|`
    pub difference: f64,
    /// Cohyponormal requires `|φ(0)| ≥ |a|`.
    pub cohyponormal: Verdict,
    /// Hyponormal requires `|φ(0)| ≤ |a|`.
    pub hyponormal: Verdict,
    /// Normal requires `|φ(0)| = |a|`.
    pub normal: Verdict,
    /// Finite-section evidence says normal while the closed form rules it
    /// out: a contradiction that should never happen.
    pub inconsistent_with_theory: bool,
}

/// Closed-form modulus conditions for `ψ = c·K_a`. Pass the hyponormality
/// class from a finite section to enable the cross-check.
pub fn kernel_modulus_check(
    op: &WcoSpec,
    tol: f64,
    evidence: Option<HyponormalityClass>,
) -> Result<KernelModulusReport, DiagnosticsError> {
    let a = kernel_point(op)?;
    let phi0_modulus = op.phi_at(Complex64::new(0.0, 0.0))?.norm();
    let a_modulus = a.norm();
    let difference = phi0_modulus - a_modulus;
    let normal = Verdict::from_holds(difference.abs() <= tol);
    Ok(KernelModulusReport {
        phi0_modulus,
        a_modulus,
        difference,
        cohyponormal: Verdict::from_holds(difference >= -tol),
        hyponormal: Verdict::from_holds(difference <= tol),
        normal,
        inconsistent_with_theory: evidence.is_some_and(|c| c.is_normal()) && normal == Verdict::Violated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolicKernelReport {
    pub a_modulus: f64,
    pub translation_number: Complex64,
    /// `|t/(2 + t)|`
    pub t_modulus: f64,
    pub sigma0_modulus: f64,
    /// `CONSISTENT` means normality is not ruled out.
    pub normal: Verdict,
}

/// For a parabolic non-automorphism and `ψ = c·K_a`, normality forces
/// `|a| = |t/(2+t)| = |σ(0)|`.
pub fn parabolic_kernel_check(op: &WcoSpec, tol: f64) -> Result<ParabolicKernelReport, DiagnosticsError> {
    let a = kernel_point(op)?;
    let phi =
        op.phi.as_lft().ok_or_else(|| DiagnosticsError::HypothesesNotMet("phi is not linear-fractional".into()))?;
    let class = phi.classify()?;
    if !class.is_parabolic_non_automorphism() {
        return Err(DiagnosticsError::NotParabolicNonAutomorphism);
    }
    let t = class.translation_number.expect("parabolic maps carry a translation number");
    let t_modulus = (t / (2.0 + t)).norm();
    let sigma = phi.adjoint_symbols(op.space.gamma().unwrap_or(1.0))?.sigma;
    let sigma0_modulus = sigma.evaluate(Complex64::new(0.0, 0.0))?.norm();
    let a_modulus = a.norm();
    let holds = (a_modulus - t_modulus).abs() <= tol && (t_modulus - sigma0_modulus).abs() <= tol;
    Ok(ParabolicKernelReport {
        a_modulus,
        translation_number: t,
        t_modulus,
        sigma0_modulus,
        normal: Verdict::from_holds(holds),
    })
}
