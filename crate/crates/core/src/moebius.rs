//! Linear-fractional self-maps of the unit disk.
//!
//! An [`LftMap`] is `z ↦ (az + b)/(cz + d)` with `ad − bc ≠ 0`, stored with its
//! largest-modulus coefficient scaled to one. Everything here is closed form:
//! the self-map test uses the exact image of the unit circle, fixed points come
//! from the quadratic `cz² + (d − a)z − b = 0`, and automorphisms are sorted
//! into elliptic / parabolic / hyperbolic by the normalized trace.

use num_complex::Complex64;
use serde::Serialize;

use crate::series::{PowerSeries, RationalPower};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative threshold below which a denominator counts as a pole.
const POLE_EPS: f64 = 16.0 * f64::EPSILON;
/// Threshold on the normalized determinant.
const DEGENERATE_EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MoebiusError {
    #[error("degenerate linear-fractional map (ad - bc = 0)")]
    Degenerate,
    #[error("evaluation hit the pole of the map at z = {0}")]
    PoleHit(Complex64),
    #[error("map is not a self-map of the unit disk")]
    NotSelfMap,
    #[error("fixed point {0} is not on the unit circle")]
    BadFixedPoint(Complex64),
    #[error("translation number {0} has negative real part or is zero")]
    BadTranslation(Complex64),
    #[error("map is not parabolic")]
    NotParabolic,
    #[error("map is not a disk automorphism")]
    NotAutomorphism,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Tolerances for the geometric predicates. The defaults are the ones the
/// rest of the crate assumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoebiusTol {
    /// Circle-geometry and trace comparisons.
    pub geometric: f64,
    /// Round trips such as translation number recovery.
    pub round_trip: f64,
    /// Distance under which an orbit point counts as a revisit.
    pub orbit: f64,
}

impl Default for MoebiusTol {
    fn default() -> Self {
        Self { geometric: 1e-10, round_trip: 1e-12, orbit: 1e-9 }
    }
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FixedPoint {
    Finite(Complex64),
    Infinity,
}

impl FixedPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            FixedPoint::Finite(z) => Some(z),
            FixedPoint::Infinity => None,
        }
    }
}

/// Image of the unit circle under a map whose pole lies outside the closed
/// disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageCircle {
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MapKind {
    Identity,
    EllipticAutomorphism,
    HyperbolicAutomorphism,
    ParabolicAutomorphism,
    /// Not an automorphism, and the closure of the image lies inside the disk.
    NonAutoInteriorClosure,
    /// Not an automorphism, and the image touches the unit circle.
    NonAutoBoundaryContact,
}

impl MapKind {
    pub fn is_automorphism(self) -> bool {
        matches!(
            self,
            MapKind::Identity
                | MapKind::EllipticAutomorphism
                | MapKind::HyperbolicAutomorphism
                | MapKind::ParabolicAutomorphism
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DenjoyWolff {
    pub point: Complex64,
    pub derivative: Complex64,
}

impl DenjoyWolff {
    pub fn on_boundary(&self, tol: f64) -> bool {
        (self.point.norm() - 1.0).abs() <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapClassification {
    pub kind: MapKind,
    /// Empty for the identity (every point is fixed).
    pub fixed_points: Vec<FixedPoint>,
    pub denjoy_wolff: Option<DenjoyWolff>,
    /// Present exactly for parabolic maps, automorphic or not.
    pub translation_number: Option<Complex64>,
    /// `(ζ, η)` with `φ(ζ) = η` on the circle, for boundary-contact
    /// non-automorphisms.
    pub boundary_contact: Option<(Complex64, Complex64)>,
}

impl MapClassification {
    pub fn is_parabolic(&self) -> bool {
        self.translation_number.is_some()
    }

    pub fn is_parabolic_non_automorphism(&self) -> bool {
        self.is_parabolic() && !self.kind.is_automorphism()
    }

    /// Denjoy–Wolff point on the unit circle, if that is where it lives.
    pub fn boundary_denjoy_wolff(&self) -> Option<DenjoyWolff> {
        self.denjoy_wolff.filter(|dw| dw.on_boundary(MoebiusTol::default().geometric))
    }

    /// Finite fixed points on the unit circle.
    pub fn boundary_fixed_points(&self) -> Vec<Complex64> {
        let tol = MoebiusTol::default().geometric;
        self.fixed_points.iter().filter_map(|p| p.finite()).filter(|z| (z.norm() - 1.0).abs() <= tol).collect()
    }
}

/// Iterates of a point, with the period if the orbit closes up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    pub points: Vec<Complex64>,
    pub period: Option<usize>,
}

impl Orbit {
    pub fn is_finite(&self) -> bool {
        self.period.is_some()
    }
}

/// `σ`, `g`, `h` in the adjoint factorization `C_φ* = T_g C_σ T_h*`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointSymbols {
    pub sigma: LftMap,
    /// `g(z) = (−b̄z + d̄)^{−γ}`
    pub g: RationalPower,
    /// `h(z) = (cz + d)^{γ}`
    pub h: RationalPower,
}

/// `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LftMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl LftMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MoebiusError> {
        let coeffs = [a, b, c, d];
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MoebiusError::InvalidParameter("non-finite coefficient".into()));
        }
        let mut pivot = 0;
        for (i, z) in coeffs.iter().enumerate() {
            if z.norm() > coeffs[pivot].norm() {
                pivot = i;
            }
        }
        let scale = coeffs[pivot];
        if scale.norm() == 0.0 {
            return Err(MoebiusError::Degenerate);
        }
        let m = LftMap { a: a / scale, b: b / scale, c: c / scale, d: d / scale };
        if m.det().norm() <= DEGENERATE_EPS {
            return Err(MoebiusError::Degenerate);
        }
        Ok(m)
    }

    /// Real-coefficient convenience constructor.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, MoebiusError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        LftMap { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `z ↦ s z`.
    pub fn scaling(s: Complex64) -> Result<Self, MoebiusError> {
        Self::new(s, ZERO, ZERO, ONE)
    }

    /// `z ↦ λ(a − z)/(1 − āz)` with `|λ| = 1`, `|a| < 1`.
    pub fn automorphism(lambda: Complex64, a: Complex64) -> Result<Self, MoebiusError> {
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(MoebiusError::InvalidParameter(format!("|lambda| = {} != 1", lambda.norm())));
        }
        if a.norm() >= 1.0 {
            return Err(MoebiusError::InvalidParameter(format!("|a| = {} >= 1", a.norm())));
        }
        Self::new(-lambda, lambda * a, -a.conj(), ONE)
    }

    /// The parabolic map with boundary fixed point `ζ` and translation number
    /// `t`: `z ↦ ((2 − t)z + tζ)/(2 + t − t ζ̄ z)`.
    pub fn parabolic_from(zeta: Complex64, t: Complex64) -> Result<Self, MoebiusError> {
        if (zeta.norm() - 1.0).abs() > MoebiusTol::default().geometric {
            return Err(MoebiusError::BadFixedPoint(zeta));
        }
        if t.re < 0.0 || t.norm() == 0.0 {
            return Err(MoebiusError::BadTranslation(t));
        }
        let two = Complex64::new(2.0, 0.0);
        Self::new(two - t, t * zeta, -t * zeta.conj(), two + t)
    }

    /// Normalized coefficients `[a, b, c, d]`.
    pub fn coeffs(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Equality as points of projective space: the coefficient vectors are
    /// proportional up to relative error `tol`.
    pub fn projectively_eq(&self, other: &LftMap, tol: f64) -> bool {
        let u = self.coeffs();
        let v = other.coeffs();
        let uu: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        let uv: Complex64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
        let lambda = uv / uu;
        let resid: f64 = u.iter().zip(&v).map(|(x, y)| (y - lambda * x).norm_sqr()).sum::<f64>().sqrt();
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        resid <= tol * vnorm
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, MoebiusError> {
        let den = self.c * z + self.d;
        if den.norm() <= POLE_EPS * (self.c.norm() * z.norm() + self.d.norm()) {
            return Err(MoebiusError::PoleHit(z));
        }
        Ok((self.a * z + self.b) / den)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LftMap) -> LftMap {
        let (p, q) = (self, inner);
        LftMap::new(p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d, p.c * q.a + p.d * q.c, p.c * q.b + p.d * q.d)
            .expect("product of nondegenerate maps is nondegenerate")
    }

    pub fn invert(&self) -> LftMap {
        LftMap::new(self.d, -self.b, -self.c, self.a).expect("adjugate of a nondegenerate map")
    }

    /// `φ′(z) = (ad − bc)/(cz + d)²`.
    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64, MoebiusError> {
        let den = self.c * z + self.d;
        if den.norm() <= POLE_EPS * (self.c.norm() * z.norm() + self.d.norm()) {
            return Err(MoebiusError::PoleHit(z));
        }
        Ok(self.det() / (den * den))
    }

    /// Image of the unit circle, when the pole `−d/c` lies outside the closed
    /// disk (otherwise the image of the disk is unbounded).
    pub fn image_circle(&self) -> Option<ImageCircle> {
        let denom = self.d.norm_sqr() - self.c.norm_sqr();
        if denom <= MoebiusTol::default().geometric {
            return None;
        }
        let center = (self.b * self.d.conj() - self.a * self.c.conj()) / denom;
        let r2 = center.norm_sqr() + (self.a.norm_sqr() - self.b.norm_sqr()) / denom;
        Some(ImageCircle { center, radius: r2.max(0.0).sqrt() })
    }

    pub fn is_self_map(&self) -> bool {
        self.is_self_map_tol(&MoebiusTol::default())
    }

    pub fn is_self_map_tol(&self, tol: &MoebiusTol) -> bool {
        match self.image_circle() {
            Some(ic) => ic.center.norm() + ic.radius <= 1.0 + tol.geometric,
            None => false,
        }
    }

    fn touches_boundary(&self, tol: &MoebiusTol) -> bool {
        self.image_circle().map(|ic| ic.center.norm() + ic.radius >= 1.0 - tol.geometric).unwrap_or(false)
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_automorphism_tol(&MoebiusTol::default())
    }

    fn is_automorphism_tol(&self, tol: &MoebiusTol) -> bool {
        self.image_circle()
            .map(|ic| ic.center.norm() <= tol.geometric && (ic.radius - 1.0).abs() <= tol.geometric)
            .unwrap_or(false)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.b.norm() <= tol && self.c.norm() <= tol && (self.a - self.d).norm() <= tol
    }

    /// Recover `(λ, a)` with `φ(z) = λ(a − z)/(1 − āz)`.
    pub fn automorphism_form(&self) -> Option<(Complex64, Complex64)> {
        if !self.is_automorphism() {
            return None;
        }
        let lambda = -self.a / self.d;
        let a = -self.b / self.a;
        Some((lambda / lambda.norm(), a))
    }

    /// Finite fixed points (with a double root reported once) and `∞` when
    /// it is fixed. Empty for the identity.
    pub fn fixed_points(&self) -> Vec<FixedPoint> {
        self.fixed_points_tol(&MoebiusTol::default())
    }

    fn fixed_points_tol(&self, tol: &MoebiusTol) -> Vec<FixedPoint> {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let tiny = 1e-14;
        if self.is_identity(tiny) {
            return Vec::new();
        }
        if c.norm() <= tiny {
            // (a z + b)/d: ∞ is fixed, plus the root of (d − a)z = b.
            if (d - a).norm() <= tiny {
                return vec![FixedPoint::Infinity];
            }
            return vec![FixedPoint::Finite(b / (d - a)), FixedPoint::Infinity];
        }
        let lin = d - a;
        let disc = lin * lin + 4.0 * b * c;
        let scale = lin.norm_sqr().max((4.0 * b * c).norm()).max(1.0);
        if disc.norm() <= tol.geometric * scale {
            return vec![FixedPoint::Finite(-lin / (2.0 * c))];
        }
        let root = disc.sqrt();
        let sign = if (lin.conj() * root).re >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (lin + sign * root);
        let z1 = q / c;
        let z2 = if q.norm() > tiny { -b / q } else { (-lin + sign * root) / (2.0 * c) };
        vec![FixedPoint::Finite(z1), FixedPoint::Finite(z2)]
    }

    pub fn classify(&self) -> Result<MapClassification, MoebiusError> {
        self.classify_tol(&MoebiusTol::default())
    }

    pub fn classify_tol(&self, tol: &MoebiusTol) -> Result<MapClassification, MoebiusError> {
        if !self.is_self_map_tol(tol) {
            return Err(MoebiusError::NotSelfMap);
        }
        if self.is_identity(tol.geometric) {
            return Ok(MapClassification {
                kind: MapKind::Identity,
                fixed_points: Vec::new(),
                denjoy_wolff: None,
                translation_number: None,
                boundary_contact: None,
            });
        }
        let fixed_points = self.fixed_points_tol(tol);
        let finite: Vec<Complex64> = fixed_points.iter().filter_map(|p| p.finite()).collect();
        let on_circle = |z: &Complex64| (z.norm() - 1.0).abs() <= tol.geometric;
        let deriv = |z: Complex64| self.derivative_at(z).unwrap_or(Complex64::new(f64::INFINITY, 0.0));

        let kind = if self.is_automorphism_tol(tol) {
            let trace2 = ((self.a + self.d) * (self.a + self.d) / self.det()).re;
            if (trace2 - 4.0).abs() <= tol.geometric * 4.0 {
                MapKind::ParabolicAutomorphism
            } else if trace2 > 4.0 {
                MapKind::HyperbolicAutomorphism
            } else {
                MapKind::EllipticAutomorphism
            }
        } else if self.touches_boundary(tol) {
            MapKind::NonAutoBoundaryContact
        } else {
            MapKind::NonAutoInteriorClosure
        };

        let denjoy_wolff = match kind {
            MapKind::Identity | MapKind::EllipticAutomorphism => None,
            MapKind::ParabolicAutomorphism => {
                // The double root is the unique fixed point; compute it directly.
                let zeta = (self.a - self.d) / (2.0 * self.c);
                let zeta = zeta / zeta.norm();
                Some(DenjoyWolff { point: zeta, derivative: deriv(zeta) })
            }
            _ => {
                let interior = finite.iter().copied().find(|z| z.norm() < 1.0 - tol.geometric);
                match interior {
                    Some(p) => Some(DenjoyWolff { point: p, derivative: deriv(p) }),
                    None => finite
                        .iter()
                        .copied()
                        .filter(on_circle)
                        .map(|z| (z, deriv(z)))
                        .filter(|(_, dz)| dz.norm() <= 1.0 + tol.geometric)
                        .min_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
                        .map(|(z, dz)| DenjoyWolff { point: z / z.norm(), derivative: dz }),
                }
            }
        };

        let parabolic = match kind {
            MapKind::ParabolicAutomorphism => true,
            MapKind::NonAutoBoundaryContact => {
                denjoy_wolff.map(|dw| on_circle(&dw.point) && (dw.derivative - 1.0).norm() <= 1e-8).unwrap_or(false)
            }
            _ => false,
        };
        let translation_number = if parabolic {
            let zeta = denjoy_wolff.expect("parabolic maps have a Denjoy-Wolff point").point;
            let p0 = self.evaluate(ZERO)?;
            Some(2.0 * p0 / (zeta - p0))
        } else {
            None
        };

        let boundary_contact = if kind == MapKind::NonAutoBoundaryContact {
            let ic = self.image_circle().expect("self-maps have an image circle");
            let eta = if ic.center.norm() > 0.0 { ic.center / ic.center.norm() } else { ONE };
            let zeta = self.invert().evaluate(eta).ok();
            zeta.map(|z| (z / z.norm(), eta))
        } else {
            None
        };

        let fixed_points = if kind == MapKind::ParabolicAutomorphism {
            vec![FixedPoint::Finite(denjoy_wolff.unwrap().point)]
        } else {
            fixed_points
        };

        Ok(MapClassification { kind, fixed_points, denjoy_wolff, translation_number, boundary_contact })
    }

    /// `t = 2φ(0)/(ζ − φ(0))` for a parabolic map with fixed point `ζ`.
    pub fn translation_number(&self) -> Result<Complex64, MoebiusError> {
        self.classify()?.translation_number.ok_or(MoebiusError::NotParabolic)
    }

    /// Iterate `z0` up to `n_max` times. LFTs are injective, so a finite orbit
    /// is a cycle through `z0`; a candidate return is confirmed over a second
    /// full cycle before the period is reported.
    pub fn orbit(&self, z0: Complex64, n_max: usize) -> Orbit {
        self.orbit_tol(z0, n_max, MoebiusTol::default().orbit)
    }

    pub fn orbit_tol(&self, z0: Complex64, n_max: usize, tol: f64) -> Orbit {
        let mut points = vec![z0];
        let mut z = z0;
        let mut period = None;
        for n in 1..=n_max {
            z = match self.evaluate(z) {
                Ok(v) => v,
                Err(_) => break,
            };
            points.push(z);
            if period.is_none() && (z - z0).norm() < tol {
                // Confirm: the next cycle must retrace the first one.
                let mut w = z;
                let mut confirmed = true;
                for expected in &points[1..=n] {
                    w = match self.evaluate(w) {
                        Ok(v) => v,
                        Err(_) => {
                            confirmed = false;
                            break;
                        }
                    };
                    if (w - expected).norm() >= tol {
                        confirmed = false;
                        break;
                    }
                }
                if confirmed {
                    period = Some(n);
                    break;
                }
            }
        }
        Orbit { points, period }
    }

    /// The symbols of `C_φ* = T_g C_σ T_h*` on the space with kernel exponent
    /// `γ`, computed from the representative with `d = 1`.
    pub fn adjoint_symbols(&self, gamma: f64) -> Result<AdjointSymbols, MoebiusError> {
        if !(gamma > 0.0) {
            return Err(MoebiusError::InvalidParameter(format!("gamma = {gamma} must be positive")));
        }
        if !self.is_self_map() {
            return Err(MoebiusError::NotSelfMap);
        }
        let (a, b, c) = (self.a / self.d, self.b / self.d, self.c / self.d);
        let sigma = LftMap::new(a.conj(), -c.conj(), -b.conj(), ONE)?;
        if !sigma.is_self_map() {
            return Err(MoebiusError::NotSelfMap);
        }
        let g = RationalPower { p: ONE, q: -b.conj(), u: ONE, v: ZERO, s: -gamma };
        let h = RationalPower { p: ONE, q: c, u: ONE, v: ZERO, s: gamma };
        Ok(AdjointSymbols { sigma, g, h })
    }

    /// Taylor coefficients of `φ` at 0 up to `order`, by long division.
    pub fn series(&self, order: usize) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(order + 1);
        let num = |k: usize| match k {
            0 => self.b,
            1 => self.a,
            _ => ZERO,
        };
        let mut prev = ZERO;
        for k in 0..=order {
            let s = (num(k) - self.c * prev) / self.d;
            coeffs.push(s);
            prev = s;
        }
        PowerSeries::new(coeffs)
    }
}
