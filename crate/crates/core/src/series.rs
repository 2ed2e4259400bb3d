//! Truncated power series and the weighted Hardy space model.
//!
//! A [`Space`] fixes the monomial norms `β(n) = ‖zⁿ‖`; the inner product is
//! `⟨f, g⟩ = Σ f̂(j) conj(ĝ(j)) β(j)²` and the reproducing kernel at `w` has
//! coefficients `conj(w)^j / β(j)²`. For `H²` and `A²_α` the kernel is
//! `(1 − w̄z)^{−γ}` with `γ = 1` and `γ = α + 2` respectively.

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Default truncation order used throughout the diagnostics.
pub const DEFAULT_ORDER: usize = 256;

/// Number of trailing coefficients inspected by the tail estimate.
const TAIL_WINDOW: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("weight index {index} is beyond the {stored} stored weights")]
    IndexBeyondStoredWeights { index: usize, stored: usize },
    #[error("point {0} is not in the open unit disk")]
    PointNotInDisk(Complex64),
    #[error("series tail bound {bound:e} exceeds tolerance {tol:e}")]
    TailTooLarge { bound: f64, tol: f64 },
    #[error("convergence radius {radius} is too small (need > {needed})")]
    ConvergenceRadiusTooSmall { radius: f64, needed: f64 },
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid rational power: {0}")]
    InvalidRationalPower(String),
    #[error("operation needs a space with a kernel exponent gamma")]
    NoKernelExponent,
}

/// Which weighted Hardy space the operator acts on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Space {
    /// `H²`, `β ≡ 1`, `γ = 1`.
    Hardy,
    /// `A²_α` with `α > −1`, `γ = α + 2`.
    Bergman { alpha: f64 },
    /// `H²(β)` with an explicit, finite weight table.
    Weighted { beta: Vec<f64> },
}

impl Space {
    pub fn bergman(alpha: f64) -> Result<Self, SeriesError> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(SeriesError::InvalidSpace(format!("Bergman alpha = {alpha} must exceed -1")));
        }
        Ok(Space::Bergman { alpha })
    }

    /// Weighted Hardy space from a weight table with `β(0) = 1`.
    pub fn weighted(beta: Vec<f64>) -> Result<Self, SeriesError> {
        let s = Space::Weighted { beta };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        match self {
            Space::Hardy => Ok(()),
            Space::Bergman { alpha } => Space::bergman(*alpha).map(|_| ()),
            Space::Weighted { beta } => {
                if beta.is_empty() {
                    return Err(SeriesError::InvalidSpace("empty weight table".into()));
                }
                if (beta[0] - 1.0).abs() > 1e-12 {
                    return Err(SeriesError::InvalidSpace(format!("beta(0) = {} but must be 1", beta[0])));
                }
                if let Some(b) = beta.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
                    return Err(SeriesError::InvalidSpace(format!("weight {b} is not a positive real")));
                }
                if !self.sup_weight_ratio().is_finite() {
                    return Err(SeriesError::InvalidSpace("sup beta(j+1)/beta(j) is not finite".into()));
                }
                Ok(())
            }
        }
    }

    /// Kernel exponent `γ`, when the kernel is `(1 − w̄z)^{−γ}`.
    pub fn gamma(&self) -> Option<f64> {
        match self {
            Space::Hardy => Some(1.0),
            Space::Bergman { alpha } => Some(alpha + 2.0),
            Space::Weighted { .. } => None,
        }
    }

    /// Number of weights available, `None` when unbounded.
    pub fn stored_weights(&self) -> Option<usize> {
        match self {
            Space::Weighted { beta } => Some(beta.len()),
            _ => None,
        }
    }

    /// `sup β(j+1)/β(j)` over the stored range (1 for `H²`, bounded by 1 for
    /// Bergman spaces).
    pub fn sup_weight_ratio(&self) -> f64 {
        match self {
            Space::Hardy | Space::Bergman { .. } => 1.0,
            Space::Weighted { beta } => beta.windows(2).map(|w| w[1] / w[0]).fold(1.0_f64, f64::max),
        }
    }

    /// `β(n) = ‖zⁿ‖`.
    pub fn beta_norm(&self, n: usize) -> Result<f64, SeriesError> {
        match self {
            Space::Hardy => Ok(1.0),
            Space::Bergman { alpha } => {
                let nf = n as f64;
                let log_sq = ln_gamma(nf + 1.0) + ln_gamma(alpha + 2.0) - ln_gamma(nf + alpha + 2.0);
                Ok((0.5 * log_sq).exp())
            }
            Space::Weighted { beta } => {
                beta.get(n).copied().ok_or(SeriesError::IndexBeyondStoredWeights { index: n, stored: beta.len() })
            }
        }
    }

    /// `β(0), …, β(order)`.
    pub fn betas(&self, order: usize) -> Result<Vec<f64>, SeriesError> {
        (0..=order).map(|n| self.beta_norm(n)).collect()
    }

    /// Kernel coefficients `conj(w)^j / β(j)²` up to `order`.
    pub fn kernel_series(&self, w: Complex64, order: usize) -> Result<PowerSeries, SeriesError> {
        check_in_disk(w)?;
        let betas = self.betas(order)?;
        let wc = w.conj();
        let mut p = ONE;
        let mut coeffs = Vec::with_capacity(order + 1);
        for b in betas {
            coeffs.push(p / (b * b));
            p *= wc;
        }
        Ok(PowerSeries::new(coeffs))
    }

    /// `‖K_w‖`: closed form `(1 − |w|²)^{−γ/2}` when `γ` exists, otherwise the
    /// partial sum over the stored weights.
    pub fn kernel_norm(&self, w: Complex64) -> Result<f64, SeriesError> {
        check_in_disk(w)?;
        match self.gamma() {
            Some(g) => Ok((1.0 - w.norm_sqr()).powf(-0.5 * g)),
            None => {
                let Space::Weighted { beta } = self else { unreachable!() };
                let r2 = w.norm_sqr();
                let mut p = 1.0;
                let mut sum = 0.0;
                for b in beta {
                    sum += p / (b * b);
                    p *= r2;
                }
                Ok(sum.sqrt())
            }
        }
    }

    /// `K_w(z) = ⟨K_w, K_z⟩`-conjugate, i.e. the kernel function at `w`
    /// evaluated at `z`.
    pub fn kernel_value(&self, w: Complex64, z: Complex64) -> Result<Complex64, SeriesError> {
        check_in_disk(w)?;
        match self.gamma() {
            Some(g) => Ok((ONE - w.conj() * z).powf(-g)),
            None => {
                let Space::Weighted { beta } = self else { unreachable!() };
                let x = w.conj() * z;
                let mut p = ONE;
                let mut sum = ZERO;
                for b in beta {
                    sum += p / (b * b);
                    p *= x;
                }
                Ok(sum)
            }
        }
    }
}

fn check_in_disk(w: Complex64) -> Result<(), SeriesError> {
    if w.norm() < 1.0 && w.re.is_finite() && w.im.is_finite() {
        Ok(())
    } else {
        Err(SeriesError::PointNotInDisk(w))
    }
}

/// A value computed from a truncated series, with an a-posteriori bound on
/// the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Taylor coefficients at 0 up to a fixed order (`coeffs[k]` multiplies
/// `z^k`). Binary operations truncate to the smaller order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        PowerSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(order: usize) -> Self {
        Self::new(vec![ZERO; order + 1])
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = c;
        s
    }

    /// `c·z^k` at the given order (zero if `k > order`).
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; zero past the stored order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Index of the last nonzero coefficient (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != ZERO).unwrap_or(0)
    }

    /// Truncate or zero-pad to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Cauchy product truncated to the smaller order.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let f = &self.coeffs[..=n];
        let g = &other.coeffs[..=n];
        let mut out = vec![ZERO; n + 1];
        for (i, fi) in f.iter().enumerate() {
            if *fi == ZERO {
                continue;
            }
            for (o, gj) in out[i..].iter_mut().zip(g) {
                *o += fi * gj;
            }
        }
        Self::new(out)
    }

    /// `self ∘ phi` for a polynomial `self`, by Horner's rule in series
    /// arithmetic. No condition on `phi(0)` is needed since `self` has finite
    /// degree. The result has order `order`, capped by `phi`'s order when
    /// `self` is not constant.
    pub fn compose_poly(&self, phi: &PowerSeries, order: usize) -> Self {
        let deg = self.degree();
        if deg == 0 {
            return Self::constant(self.coeffs[0], order);
        }
        let n = order.min(phi.order());
        let phi = phi.with_order(n);
        let mut acc = Self::constant(self.coeffs[deg], n);
        for k in (0..deg).rev() {
            acc = acc.multiply(&phi);
            acc.coeffs[0] += self.coeffs[k];
        }
        acc
    }

    /// Termwise derivative; the order drops by one (a constant stays order 0).
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zeros(0);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    /// Horner partial sum, no tail check.
    pub fn value_at(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Geometric tail estimate at `z`: the growth ratio is the largest
    /// (gap-normalized) ratio between successive nonzero coefficients among
    /// the last sixteen stored terms. Infinite when the estimated ratio times
    /// `|z|` reaches one.
    pub fn tail_bound(&self, z: Complex64) -> f64 {
        let n = self.order();
        let r = z.norm();
        if r == 0.0 {
            return 0.0;
        }
        let start = n.saturating_sub(TAIL_WINDOW);
        let nz: Vec<(usize, f64)> = (start..=n).map(|k| (k, self.coeffs[k].norm())).filter(|(_, m)| *m > 0.0).collect();
        // Exact trailing zeros after at most one nonzero term: a polynomial.
        match nz.as_slice() {
            [] => return 0.0,
            [(k, _)] if *k < n => return 0.0,
            _ => {}
        }
        let ratio = if nz.len() == 1 {
            1.0
        } else {
            nz.windows(2).map(|w| (w[1].1 / w[0].1).powf(1.0 / (w[1].0 - w[0].0) as f64)).fold(0.0_f64, f64::max)
        };
        let rho = ratio * r;
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        let lead = nz.iter().map(|(k, m)| m * ratio.powi((n - k) as i32)).fold(0.0_f64, f64::max);
        lead * r.powi(n as i32) * rho / (1.0 - rho)
    }

    /// Evaluate with an a-posteriori tail bound; fails when the bound exceeds
    /// `tol`.
    pub fn evaluate(&self, z: Complex64, tol: f64) -> Result<Evaluation, SeriesError> {
        let tail_bound = self.tail_bound(z);
        if !(tail_bound <= tol) {
            return Err(SeriesError::TailTooLarge { bound: tail_bound, tol });
        }
        Ok(Evaluation { value: self.value_at(z), tail_bound })
    }

    /// Principal-branch power `self^s`, defined when the constant term is
    /// nonzero. Uses the recurrence from `G F′ = s G′ F`.
    pub fn powf(&self, s: f64) -> Result<Self, SeriesError> {
        let g = &self.coeffs;
        let g0 = g[0];
        if g0 == ZERO {
            return Err(SeriesError::InvalidRationalPower("power of a series with zero constant term".into()));
        }
        let n = self.order();
        let mut f = vec![ZERO; n + 1];
        f[0] = g0.powf(s);
        for m in 1..=n {
            let mut acc = ZERO;
            for k in 1..=m {
                if g[k] == ZERO {
                    continue;
                }
                acc += g[k] * f[m - k] * (s * k as f64 - (m - k) as f64);
            }
            f[m] = acc / (g0 * m as f64);
        }
        Ok(Self::new(f))
    }

    /// `Σ f̂(j) conj(ĝ(j)) β(j)²` over the common order.
    pub fn inner_product(&self, other: &Self, space: &Space) -> Result<Complex64, SeriesError> {
        let n = self.order().min(other.order());
        let betas = space.betas(n)?;
        Ok((0..=n).map(|j| self.coeffs[j] * other.coeffs[j].conj() * (betas[j] * betas[j])).sum())
    }

    pub fn norm(&self, space: &Space) -> Result<f64, SeriesError> {
        Ok(self.inner_product(self, space)?.re.max(0.0).sqrt())
    }
}

/// Generalized binomial coefficients `binom(s, k) x^k`, `k = 0..=order`.
fn binomial_series(s: f64, x: Complex64, order: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut c = ONE;
    out.push(c);
    for k in 1..=order {
        c = c * x * ((s - k as f64 + 1.0) / k as f64);
        out.push(c);
    }
    out
}

fn is_nonneg_integer(s: f64) -> bool {
    s >= 0.0 && s.fract() == 0.0
}

/// `z ↦ ((p + qz)/(u + vz))^s`, principal branch fixed by `(p/u)^s` at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalPower {
    pub p: Complex64,
    pub q: Complex64,
    pub u: Complex64,
    pub v: Complex64,
    pub s: f64,
}

impl RationalPower {
    /// `(1 − w̄z)^{−γ}`.
    pub fn kernel(w: Complex64, gamma: f64) -> Self {
        RationalPower { p: ONE, q: -w.conj(), u: ONE, v: ZERO, s: -gamma }
    }

    /// Radius of the largest disk about 0 where both binomial factors
    /// converge; infinite for a polynomial numerator and constant denominator.
    pub fn convergence_radius(&self) -> f64 {
        let num = if self.q == ZERO || is_nonneg_integer(self.s) { f64::INFINITY } else { (self.p / self.q).norm() };
        let den = if self.v == ZERO || self.s == 0.0 { f64::INFINITY } else { (self.u / self.v).norm() };
        num.min(den)
    }

    /// The denominator factor must converge on a disk of radius > 1. The
    /// numerator may reach radius 1 only when `s > 0` (absolute convergence on
    /// the closed disk); a nonnegative integer `s` makes it a polynomial.
    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.p == ZERO || self.u == ZERO {
            return Err(SeriesError::InvalidRationalPower("p and u must be nonzero".into()));
        }
        if !self.s.is_finite() {
            return Err(SeriesError::InvalidRationalPower("exponent must be finite".into()));
        }
        let vu = (self.v / self.u).norm();
        if self.s != 0.0 && vu >= 1.0 {
            return Err(SeriesError::ConvergenceRadiusTooSmall { radius: 1.0 / vu, needed: 1.0 });
        }
        if !is_nonneg_integer(self.s) {
            let qp = (self.q / self.p).norm();
            let bad = if self.s > 0.0 { qp > 1.0 } else { qp >= 1.0 };
            if bad {
                return Err(SeriesError::ConvergenceRadiusTooSmall { radius: 1.0 / qp, needed: 1.0 });
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let lead = (self.p / self.u).powf(self.s);
        let num = ONE + self.q / self.p * z;
        let den = ONE + self.v / self.u * z;
        let num_pow = if is_nonneg_integer(self.s) { num.powi(self.s as i32) } else { num.powf(self.s) };
        lead * num_pow * den.powf(-self.s)
    }

    /// Product of the two binomial expansions scaled by `(p/u)^s`.
    pub fn series(&self, order: usize) -> Result<PowerSeries, SeriesError> {
        self.validate()?;
        let lead = (self.p / self.u).powf(self.s);
        let a = PowerSeries::new(binomial_series(self.s, self.q / self.p, order));
        let b = PowerSeries::new(binomial_series(-self.s, self.v / self.u, order));
        Ok(a.multiply(&b).scale(lead))
    }
}
