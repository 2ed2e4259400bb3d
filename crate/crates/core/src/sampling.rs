//! Reproducible sample points and random test operators.
//!
//! Disk samples come from a Halton sequence with a seeded Cranley–Patterson
//! shift, so a fixed seed always yields the same points while different seeds
//! decorrelate runs. Random maps and symbols draw from a `ChaCha8Rng`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::moebius::{LftMap, MapKind};
use crate::wco::SymbolSpec;

const PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Radical inverse of `index` in `base`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base as u64) as f64 * inv;
        index /= base as u64;
        inv /= b;
    }
    out
}

fn shifts(seed: u64) -> [f64; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [rng.random(), rng.random(), rng.random(), rng.random()]
}

fn to_disk(u: f64, v: f64, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * u.sqrt(), std::f64::consts::TAU * v)
}

/// `n` area-uniform low-discrepancy points in the disk `|z| ≤ radius`.
pub fn disk_points(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let s = shifts(seed);
    (1..=n as u64)
        .map(|k| {
            let u = (radical_inverse(k, PRIMES[0]) + s[0]).fract();
            let v = (radical_inverse(k, PRIMES[1]) + s[1]).fract();
            to_disk(u, v, radius)
        })
        .collect()
}

/// `n` pairs `(w, v)` in the disk `|z| ≤ radius` from a four-dimensional
/// shifted Halton sequence.
pub fn disk_pairs(n: usize, radius: f64, seed: u64) -> Vec<(Complex64, Complex64)> {
    let s = shifts(seed);
    (1..=n as u64)
        .map(|k| {
            let h: Vec<f64> = (0..4).map(|d| (radical_inverse(k, PRIMES[d]) + s[d]).fract()).collect();
            (to_disk(h[0], h[1], radius), to_disk(h[2], h[3], radius))
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Uniform in modulus on `[r_min, r_max]`, uniform in argument.
pub fn annulus_point<R: Rng>(rng: &mut R, r_min: f64, r_max: f64) -> Complex64 {
    let r = if r_max > r_min { rng.random_range(r_min..r_max) } else { r_min };
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

/// `φ = c + s·λ(a − z)/(1 − āz)` with `s ∈ [0.2, 1]` and `|c| ≤ 0.9(1 − s)`,
/// which is always a self-map; `s = 1` gives an automorphism.
pub fn random_self_map<R: Rng>(rng: &mut R) -> LftMap {
    let lambda = unimodular(rng);
    let a = annulus_point(rng, 0.0, 0.7);
    let s: f64 = rng.random_range(0.2..=1.0);
    let c = annulus_point(rng, 0.0, 0.9 * (1.0 - s));
    LftMap::new(-c * a.conj() - s * lambda, c + s * lambda * a, -a.conj(), Complex64::new(1.0, 0.0))
        .expect("nondegenerate by construction")
}

/// Hyperbolic automorphism with `|φ(0)| ≤ max_shift`, drawn by rejection with
/// the normalized squared trace at least 4.2.
pub fn random_hyperbolic_automorphism<R: Rng>(rng: &mut R, max_shift: f64) -> LftMap {
    loop {
        let lambda = unimodular(rng);
        let a = annulus_point(rng, 0.1, max_shift);
        let m = LftMap::automorphism(lambda, a).expect("|a| < 1");
        let [ca, _, _, cd] = m.coeffs();
        let trace2 = ((ca + cd) * (ca + cd) / m.det()).re;
        if trace2 >= 4.2 && m.classify().map(|c| c.kind) == Ok(MapKind::HyperbolicAutomorphism) {
            return m;
        }
    }
}

/// Parabolic automorphism with a random fixed point and translation number
/// `t = iy`, `|y| ∈ [y_min, y_max]`.
pub fn random_parabolic_automorphism<R: Rng>(rng: &mut R, y_min: f64, y_max: f64) -> LftMap {
    let zeta = unimodular(rng);
    let y = rng.random_range(y_min..=y_max) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    LftMap::parabolic_from(zeta, Complex64::new(0.0, y)).expect("valid parabolic parameters")
}

/// Polynomial of degree at most `max_degree` with coefficients in the unit
/// square, constant term bounded away from zero.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: usize) -> SymbolSpec {
    let deg = rng.random_range(0..=max_degree);
    let mut coeffs: Vec<Complex64> =
        (0..=deg).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    coeffs[0] += Complex64::new(1.0, 0.0);
    SymbolSpec::Polynomial { coeffs }
}

pub fn random_kernel<R: Rng>(rng: &mut R, max_modulus: f64) -> SymbolSpec {
    SymbolSpec::kernel(annulus_point(rng, 0.0, max_modulus))
}
