//! The weighted composition operator `C_{ψ,φ} f = ψ · (f ∘ φ)`: weight
//! symbols, self-maps, the exact action of the adjoint on kernels, and finite
//! sections in the orthonormal monomial basis `e_j = z^j / β(j)`.
//!
//! Matrix convention: column `j` holds the coefficients of `C e_j`, so entry
//! `(i, j)` is `⟨C e_j, e_i⟩ = ĉ_i(ψ φ^j) β(i)/β(j)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{vec_norm, CMatrix, LinalgError};
use crate::moebius::{LftMap, MoebiusError};
use crate::par::Exec;
use crate::series::{PowerSeries, RationalPower, SeriesError, Space};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Extra order used when rendering products before truncating.
const GUARD_BAND: usize = 16;
/// Series self-maps must stay this far inside the disk on the boundary grid.
const SERIES_SELF_MAP_MARGIN: f64 = 1e-6;
const BOUNDARY_SAMPLES: usize = 1024;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WcoError {
    #[error("phi is not a self-map of the disk: {0}")]
    NotSelfMap(String),
    #[error("weight symbol is not bounded on the disk")]
    UnboundedSymbol,
    #[error("point {0} is not in the open unit disk")]
    PointNotInDisk(Complex64),
    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Closed-form weight symbol `ψ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SymbolSpec {
    Polynomial {
        coeffs: Vec<Complex64>,
    },
    /// `scale · K_w` in the ambient space.
    ScaledKernel {
        scale: Complex64,
        w: Complex64,
    },
    RationalPower(RationalPower),
    Product {
        factors: Vec<SymbolSpec>,
    },
    Sum {
        terms: Vec<SymbolSpec>,
    },
}

impl SymbolSpec {
    pub fn constant(c: Complex64) -> Self {
        SymbolSpec::Polynomial { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        SymbolSpec::Polynomial { coeffs: coeffs.to_vec() }
    }

    pub fn kernel(w: Complex64) -> Self {
        SymbolSpec::ScaledKernel { scale: ONE, w }
    }

    pub fn scaled_kernel(scale: Complex64, w: Complex64) -> Self {
        SymbolSpec::ScaledKernel { scale, w }
    }

    pub fn plus(self, other: SymbolSpec) -> Self {
        SymbolSpec::Sum { terms: vec![self, other] }
    }

    /// `(scale, a)` when `ψ = scale · K_a`; a constant counts as `c · K_0`.
    pub fn as_kernel(&self) -> Option<(Complex64, Complex64)> {
        match self {
            SymbolSpec::ScaledKernel { scale, w } => Some((*scale, *w)),
            SymbolSpec::Polynomial { coeffs } if coeffs.iter().skip(1).all(|c| *c == ZERO) => {
                Some((coeffs.first().copied().unwrap_or(ZERO), ZERO))
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), WcoError> {
        match self {
            SymbolSpec::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(WcoError::InvalidSymbol("polynomial without coefficients".into()));
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(WcoError::InvalidSymbol("non-finite polynomial coefficient".into()));
                }
                Ok(())
            }
            SymbolSpec::ScaledKernel { scale, w } => {
                if !scale.is_finite() {
                    return Err(WcoError::InvalidSymbol("non-finite kernel scale".into()));
                }
                if !(w.norm() < 1.0) {
                    return Err(WcoError::PointNotInDisk(*w));
                }
                Ok(())
            }
            SymbolSpec::RationalPower(r) => Ok(r.validate()?),
            SymbolSpec::Product { factors: parts } | SymbolSpec::Sum { terms: parts } => {
                if parts.is_empty() {
                    return Err(WcoError::InvalidSymbol("empty product or sum".into()));
                }
                parts.iter().try_for_each(SymbolSpec::validate)
            }
        }
    }

    /// Radius of convergence of the Taylor series at 0 (infinite for
    /// polynomials).
    pub fn convergence_radius(&self) -> f64 {
        match self {
            SymbolSpec::Polynomial { .. } => f64::INFINITY,
            SymbolSpec::ScaledKernel { scale, w } => {
                if *scale == ZERO || *w == ZERO {
                    f64::INFINITY
                } else {
                    1.0 / w.norm()
                }
            }
            SymbolSpec::RationalPower(r) => r.convergence_radius(),
            SymbolSpec::Product { factors: parts } | SymbolSpec::Sum { terms: parts } => {
                parts.iter().map(SymbolSpec::convergence_radius).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Taylor coefficients to `order`.
    pub fn series(&self, space: &Space, order: usize) -> Result<PowerSeries, WcoError> {
        Ok(match self {
            SymbolSpec::Polynomial { coeffs } => PowerSeries::new(coeffs.clone()).with_order(order),
            SymbolSpec::ScaledKernel { scale, w } => space.kernel_series(*w, order)?.scale(*scale),
            SymbolSpec::RationalPower(r) => r.series(order)?,
            SymbolSpec::Product { factors } => {
                let guarded = order + GUARD_BAND;
                let mut acc = PowerSeries::constant(ONE, guarded);
                for f in factors {
                    acc = acc.multiply(&f.series(space, guarded)?);
                }
                acc.with_order(order)
            }
            SymbolSpec::Sum { terms } => {
                let mut acc = PowerSeries::zeros(order);
                for t in terms {
                    acc = acc.add(&t.series(space, order)?);
                }
                acc
            }
        })
    }

    /// Pointwise value from the closed form.
    pub fn evaluate(&self, space: &Space, z: Complex64) -> Result<Complex64, WcoError> {
        Ok(match self {
            SymbolSpec::Polynomial { coeffs } => PowerSeries::new(coeffs.clone()).value_at(z),
            SymbolSpec::ScaledKernel { scale, w } => scale * space.kernel_value(*w, z)?,
            SymbolSpec::RationalPower(r) => r.evaluate(z),
            SymbolSpec::Product { factors } => {
                let mut acc = ONE;
                for f in factors {
                    acc *= f.evaluate(space, z)?;
                }
                acc
            }
            SymbolSpec::Sum { terms } => {
                let mut acc = ZERO;
                for t in terms {
                    acc += t.evaluate(space, z)?;
                }
                acc
            }
        })
    }

    /// `ψ′(z)` from the closed form, by the product and chain rules.
    pub fn derivative(&self, space: &Space, z: Complex64) -> Result<Complex64, WcoError> {
        Ok(match self {
            SymbolSpec::Polynomial { coeffs } => PowerSeries::new(coeffs.clone()).differentiate().value_at(z),
            SymbolSpec::ScaledKernel { scale, w } => match space.gamma() {
                Some(g) => {
                    let base = ONE - w.conj() * z;
                    scale * g * w.conj() * base.powf(-g - 1.0)
                }
                None => {
                    let order = space.stored_weights().unwrap_or(1) - 1;
                    space.kernel_series(*w, order)?.scale(*scale).differentiate().value_at(z)
                }
            },
            SymbolSpec::RationalPower(r) => {
                // d/dz ((p+qz)/(u+vz))^s = s f (q/(p+qz) − v/(u+vz))
                r.evaluate(z) * r.s * (r.q / (r.p + r.q * z) - r.v / (r.u + r.v * z))
            }
            SymbolSpec::Product { factors } => {
                let vals: Vec<Complex64> = factors.iter().map(|f| f.evaluate(space, z)).collect::<Result<_, _>>()?;
                let mut acc = ZERO;
                for (k, f) in factors.iter().enumerate() {
                    let others: Complex64 = vals.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| *v).product();
                    acc += f.derivative(space, z)? * others;
                }
                acc
            }
            SymbolSpec::Sum { terms } => {
                let mut acc = ZERO;
                for t in terms {
                    acc += t.derivative(space, z)?;
                }
                acc
            }
        })
    }
}

/// The composition symbol: an exact LFT or a truncated Taylor series.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SelfMap {
    Lft(LftMap),
    Series(PowerSeries),
}

impl SelfMap {
    pub fn as_lft(&self) -> Option<&LftMap> {
        match self {
            SelfMap::Lft(m) => Some(m),
            SelfMap::Series(_) => None,
        }
    }

    pub fn series(&self, order: usize) -> PowerSeries {
        match self {
            SelfMap::Lft(m) => m.series(order),
            SelfMap::Series(s) => s.with_order(order),
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, WcoError> {
        match self {
            SelfMap::Lft(m) => Ok(m.evaluate(z)?),
            SelfMap::Series(s) => Ok(s.value_at(z)),
        }
    }

    /// Exact test for LFTs; a boundary sample grid for series.
    pub fn validate(&self) -> Result<(), WcoError> {
        match self {
            SelfMap::Lft(m) => {
                if m.is_self_map() {
                    Ok(())
                } else {
                    Err(WcoError::NotSelfMap("image of the disk leaves the disk".into()))
                }
            }
            SelfMap::Series(s) => {
                if s.coeffs().iter().any(|c| !c.is_finite()) {
                    return Err(WcoError::NotSelfMap("non-finite coefficient".into()));
                }
                let max = boundary_grid(BOUNDARY_SAMPLES).map(|z| s.value_at(z).norm()).fold(0.0_f64, f64::max);
                if max < 1.0 - SERIES_SELF_MAP_MARGIN {
                    Ok(())
                } else {
                    Err(WcoError::NotSelfMap(format!("max boundary modulus {max}")))
                }
            }
        }
    }
}

/// `n` equally spaced points on the unit circle, starting at 1.
pub fn boundary_grid(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
}

/// A validated operator: `ψ` bounded, `φ` a self-map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WcoSpec {
    pub psi: SymbolSpec,
    pub phi: SelfMap,
    pub space: Space,
}

impl WcoSpec {
    pub fn new(psi: SymbolSpec, phi: SelfMap, space: Space) -> Result<Self, WcoError> {
        space.validate()?;
        psi.validate()?;
        phi.validate()?;
        // Boundedness: every closed-form symbol is bounded once its series
        // converges past the unit circle; otherwise probe close to it.
        if psi.convergence_radius() <= 1.0 {
            let r = 1.0 - 1e-9;
            for z in boundary_grid(BOUNDARY_SAMPLES) {
                if !psi.evaluate(&space, z * r)?.is_finite() {
                    return Err(WcoError::UnboundedSymbol);
                }
            }
        }
        Ok(WcoSpec { psi, phi, space })
    }

    pub fn lft(psi: SymbolSpec, phi: LftMap, space: Space) -> Result<Self, WcoError> {
        Self::new(psi, SelfMap::Lft(phi), space)
    }

    pub fn psi_at(&self, z: Complex64) -> Result<Complex64, WcoError> {
        self.psi.evaluate(&self.space, z)
    }

    pub fn phi_at(&self, z: Complex64) -> Result<Complex64, WcoError> {
        self.phi.evaluate(z)
    }

    /// Same `φ` and space, new weight.
    pub fn with_psi(&self, psi: SymbolSpec) -> Result<Self, WcoError> {
        Self::new(psi, self.phi.clone(), self.space.clone())
    }

    /// `ψ · (f ∘ φ)` for a polynomial `f`, to `order`.
    pub fn apply(&self, f: &PowerSeries, order: usize) -> Result<PowerSeries, WcoError> {
        let psi = self.psi.series(&self.space, order)?;
        let comp = f.compose_poly(&self.phi.series(order), order);
        Ok(psi.multiply(&comp))
    }

    /// `C* K_w = conj(ψ(w)) K_{φ(w)}`: returns `(conj(ψ(w)), φ(w))`.
    pub fn adjoint_on_kernel(&self, w: Complex64) -> Result<(Complex64, Complex64), WcoError> {
        if !(w.norm() < 1.0) {
            return Err(WcoError::PointNotInDisk(w));
        }
        Ok((self.psi_at(w)?.conj(), self.phi_at(w)?))
    }

    /// Square `n × n` finite section.
    pub fn truncate(&self, n: usize, exec: Exec) -> Result<TruncatedOperator, WcoError> {
        self.truncate_rect(n, n, exec)
    }

    /// `rows × cols` section: the first `cols` basis images, expanded to
    /// `rows` coefficients.
    pub fn truncate_rect(&self, rows: usize, cols: usize, exec: Exec) -> Result<TruncatedOperator, WcoError> {
        assert!(rows >= 1 && cols >= 1, "empty truncation");
        let order = rows - 1;
        let betas = self.space.betas(order.max(cols - 1))?;
        let psi = self.psi.series(&self.space, order)?;
        let phi = self.phi.series(order);
        // Powers of φ are a sequential chain; the products with ψ fan out.
        let mut powers = Vec::with_capacity(cols);
        let mut p = PowerSeries::constant(ONE, order);
        for j in 0..cols {
            if j > 0 {
                p = p.multiply(&phi);
            }
            powers.push(p.clone());
        }
        let columns = exec.map(cols, |j| {
            let c = psi.multiply(&powers[j]);
            c.coeffs().iter().enumerate().map(|(i, v)| v * (betas[i] / betas[j])).collect::<Vec<_>>()
        });
        Ok(TruncatedOperator { matrix: CMatrix::from_columns(columns)?, space: self.space.clone() })
    }

    /// Relative residual `‖T* k̂_w − conj(ψ(w)) K̂_{φ(w)}‖ / ‖K̂_{φ(w)}‖` in
    /// orthonormal coordinates, where `k̂_w[j] = conj(w)^j / β(j)`.
    pub fn kernel_adjoint_residual(&self, t: &TruncatedOperator, w: Complex64) -> Result<f64, WcoError> {
        let (scale, pw) = self.adjoint_on_kernel(w)?;
        let n = t.matrix.rows();
        let kw = kernel_coordinates(&self.space, w, n)?;
        let lhs = t.matrix.adjoint_matvec(&kw);
        let rhs = kernel_coordinates(&self.space, pw, t.matrix.cols())?;
        let diff: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(a, b)| a - scale * b).collect();
        Ok(vec_norm(&diff) / vec_norm(&rhs))
    }

    /// `max_w |ψ(w)| ‖K_{φ(w)}‖ / ‖K_w‖`, a lower bound for `‖C‖`.
    pub fn norm_lower_bound(&self, samples: &[Complex64]) -> Result<f64, WcoError> {
        let mut best = 0.0_f64;
        for &w in samples {
            if !(w.norm() < 1.0) {
                return Err(WcoError::PointNotInDisk(w));
            }
            let v = self.psi_at(w)?.norm() * self.space.kernel_norm(self.phi_at(w)?)? / self.space.kernel_norm(w)?;
            best = best.max(v);
        }
        Ok(best)
    }
}

/// Coordinates of `K_w` in the orthonormal basis, `conj(w)^j / β(j)`.
pub fn kernel_coordinates(space: &Space, w: Complex64, n: usize) -> Result<Vec<Complex64>, WcoError> {
    if !(w.norm() < 1.0) {
        return Err(WcoError::PointNotInDisk(w));
    }
    let betas = space.betas(n - 1)?;
    let wc = w.conj();
    let mut p = ONE;
    Ok(betas
        .iter()
        .map(|b| {
            let v = p / *b;
            p *= wc;
            v
        })
        .collect())
}

/// Finite section of an operator in the orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedOperator {
    pub matrix: CMatrix,
    pub space: Space,
}

impl TruncatedOperator {
    pub fn order(&self) -> usize {
        self.matrix.cols()
    }

    pub fn adjoint(&self) -> Self {
        TruncatedOperator { matrix: self.matrix.adjoint(), space: self.space.clone() }
    }
}

/// Matrix of multiplication by an analytic `b`: entry `(i, j)` is
/// `b̂_{i−j} β(i)/β(j)` for `i ≥ j`.
pub fn toeplitz_truncation(b: &SymbolSpec, space: &Space, n: usize) -> Result<TruncatedOperator, WcoError> {
    let series = b.series(space, n - 1)?;
    let betas = space.betas(n - 1)?;
    let matrix = CMatrix::from_fn(n, n, |i, j| if i >= j { series.coeff(i - j) * (betas[i] / betas[j]) } else { ZERO });
    Ok(TruncatedOperator { matrix, space: space.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn hyperbolic() -> LftMap {
        LftMap::real(1.0, 0.5, 0.5, 1.0).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn symbol_series_examples() {
        let k0 = SymbolSpec::kernel(ZERO).series(&Space::Hardy, 12).unwrap();
        assert_eq!(k0, PowerSeries::constant(ONE, 12));
        let k = SymbolSpec::kernel(c64(-0.5, 0.0)).series(&Space::Hardy, 12).unwrap();
        for j in 0..=12 {
            assert!(close(k.coeff(j), c64((-0.5f64).powi(j as i32), 0.0), 1e-15));
        }
        let prod = SymbolSpec::Product {
            factors: vec![SymbolSpec::polynomial(&[ONE, c64(0.5, 0.0)]), SymbolSpec::kernel(c64(-0.5, 0.0))],
        };
        let s = prod.series(&Space::Hardy, 40).unwrap();
        assert!(close(s.coeff(0), ONE, 1e-15));
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn series_matches_closed_form_inside() {
        let w = c64(0.3, -0.2);
        let cases = [
            SymbolSpec::polynomial(&[ONE, c64(0.2, 0.1), c64(0.0, -0.3)]),
            SymbolSpec::scaled_kernel(c64(2.0, 1.0), w),
            SymbolSpec::RationalPower(RationalPower {
                p: ONE,
                q: c64(0.3, 0.0),
                u: c64(2.0, 0.0),
                v: c64(0.0, 1.0),
                s: 1.7,
            }),
            SymbolSpec::Product { factors: vec![SymbolSpec::kernel(w), SymbolSpec::polynomial(&[ONE, ONE])] },
            SymbolSpec::kernel(w).plus(SymbolSpec::polynomial(&[ZERO, c64(0.1, 0.0)])),
        ];
        for space in [Space::Hardy, Space::Bergman { alpha: 0.5 }] {
            for psi in &cases {
                let s = psi.series(&space, 256).unwrap();
                for z in [c64(0.7, 0.0), c64(0.0, -0.7), c64(0.4, 0.5)] {
                    assert!(close(s.value_at(z), psi.evaluate(&space, z).unwrap(), 1e-10));
                    let h = 1e-6;
                    let fd = (psi.evaluate(&space, z + h).unwrap() - psi.evaluate(&space, z - h).unwrap()) / (2.0 * h);
                    assert!(close(psi.derivative(&space, z).unwrap(), fd, 1e-6));
                }
            }
        }
    }

    #[test]
    fn apply_examples() {
        let half = WcoSpec::lft(SymbolSpec::one(), LftMap::scaling(c64(0.5, 0.0)).unwrap(), Space::Hardy).unwrap();
        let z2 = PowerSeries::from_real(&[0.0, 0.0, 1.0]);
        let out = half.apply(&z2, 4).unwrap();
        assert_eq!(out, PowerSeries::from_real(&[0.0, 0.0, 0.25, 0.0, 0.0]));
        let shift = WcoSpec::lft(SymbolSpec::polynomial(&[ZERO, ONE]), LftMap::identity(), Space::Hardy).unwrap();
        let out = shift.apply(&PowerSeries::from_real(&[1.0, 1.0]), 3).unwrap();
        assert_eq!(out, PowerSeries::from_real(&[0.0, 1.0, 1.0, 0.0]));
        let normal = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), hyperbolic(), Space::Hardy).unwrap();
        let out = normal.apply(&PowerSeries::from_real(&[1.0]), 128).unwrap();
        assert!(close(out.value_at(c64(0.3, 0.0)), c64(1.0 / 1.15, 0.0), 1e-12));
    }

    #[test]
    fn truncation_examples() {
        let s = 0.6;
        for space in [Space::Hardy, Space::Bergman { alpha: 0.0 }] {
            let op = WcoSpec::lft(SymbolSpec::one(), LftMap::scaling(c64(s, 0.0)).unwrap(), space).unwrap();
            let t = op.truncate(10, Exec::Sequential).unwrap();
            for i in 0..10 {
                for j in 0..10 {
                    let expect = if i == j { s.powi(i as i32) } else { 0.0 };
                    assert!(close(t.matrix[(i, j)], c64(expect, 0.0), 1e-15));
                }
            }
        }
        let id = WcoSpec::lft(SymbolSpec::one(), LftMap::identity(), Space::Hardy).unwrap();
        assert_eq!(id.truncate(6, Exec::Parallel).unwrap().matrix, CMatrix::identity(6));
    }

    #[test]
    fn truncation_policies_agree() {
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(0.2, 0.1)), hyperbolic(), Space::Bergman { alpha: 1.0 }).unwrap();
        let a = op.truncate(48, Exec::Sequential).unwrap();
        let b = op.truncate(48, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn adjoint_on_kernel_examples() {
        let half = WcoSpec::lft(SymbolSpec::one(), LftMap::scaling(c64(0.5, 0.0)).unwrap(), Space::Hardy).unwrap();
        assert_eq!(half.adjoint_on_kernel(c64(0.5, 0.0)).unwrap(), (ONE, c64(0.25, 0.0)));
        let normal = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), hyperbolic(), Space::Hardy).unwrap();
        let (scale, point) = normal.adjoint_on_kernel(c64(0.3, 0.0)).unwrap();
        assert!(close(scale, c64(1.0 / 1.15, 0.0), 1e-15));
        assert!(close(point, c64(0.8 / 1.15, 0.0), 1e-15));
        let t = normal.truncate(256, Exec::Parallel).unwrap();
        assert!(normal.kernel_adjoint_residual(&t, c64(0.3, 0.0)).unwrap() <= 1e-8);
        assert!(matches!(normal.adjoint_on_kernel(ONE), Err(WcoError::PointNotInDisk(_))));
    }

    #[test]
    fn toeplitz_examples() {
        assert_eq!(toeplitz_truncation(&SymbolSpec::one(), &Space::Hardy, 5).unwrap().matrix, CMatrix::identity(5));
        let shift = toeplitz_truncation(&SymbolSpec::polynomial(&[ZERO, ONE]), &Space::Hardy, 5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(shift.matrix[(i, j)], if i == j + 1 { ONE } else { ZERO });
            }
        }
    }

    #[test]
    fn norm_lower_bound_examples() {
        let id = WcoSpec::lft(SymbolSpec::one(), LftMap::identity(), Space::Hardy).unwrap();
        assert!((id.norm_lower_bound(&[c64(0.3, 0.4), ZERO]).unwrap() - 1.0).abs() < 1e-15);
        let par = WcoSpec::lft(SymbolSpec::one(), LftMap::real(1.0, 1.0, -1.0, 3.0).unwrap(), Space::Hardy).unwrap();
        let b = par.norm_lower_bound(&[ZERO]).unwrap();
        assert!((b - 3.0 / (2.0 * 2f64.sqrt())).abs() < 1e-14);
        let normal = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), hyperbolic(), Space::Hardy).unwrap();
        let b = normal.norm_lower_bound(&[c64(0.99, 0.0)]).unwrap();
        assert!((b - 2.0 / 3f64.sqrt()).abs() < 1e-2);
    }

    #[test]
    fn rejects_bad_inputs() {
        let two_z = LftMap::real(2.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(WcoSpec::lft(SymbolSpec::one(), two_z, Space::Hardy), Err(WcoError::NotSelfMap(_))));
        let big = SelfMap::Series(PowerSeries::from_real(&[0.5, 0.6]));
        assert!(matches!(WcoSpec::new(SymbolSpec::one(), big, Space::Hardy), Err(WcoError::NotSelfMap(_))));
        let ok = SelfMap::Series(PowerSeries::from_real(&[0.1, 0.5, 0.2]));
        assert!(WcoSpec::new(SymbolSpec::one(), ok, Space::Hardy).is_ok());
    }
}
