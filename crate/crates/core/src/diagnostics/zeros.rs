//! Zero counting by the argument principle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::DiagnosticsError;
use crate::par::Exec;
use crate::series::Space;
use crate::wco::SymbolSpec;

pub const MIN_NODES: usize = 4096;
const INTEGRALITY_TOL: f64 = 0.01;
const CONTOUR_CLEARANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCount {
    pub count: i64,
    pub winding: f64,
    /// Distance of the computed winding number from the nearest integer,
    /// including the imaginary part.
    pub residual: f64,
    pub min_modulus: f64,
    pub nodes: usize,
}

/// Number of zeros of `ψ` in `|z| < r`, as the trapezoid-rule mean of
/// `z ψ′(z)/ψ(z)` over `nodes` equispaced points on the circle (at least
/// 4096 are used).
pub fn zero_count(
    psi: &SymbolSpec,
    space: &Space,
    r: f64,
    nodes: usize,
    exec: Exec,
) -> Result<ZeroCount, DiagnosticsError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(DiagnosticsError::InvalidArgument(format!("radius {r} must lie in (0, 1)")));
    }
    let nodes = nodes.max(MIN_NODES);
    let samples = exec.map(nodes, |k| {
        let z = Complex64::from_polar(r, TAU * k as f64 / nodes as f64);
        let f = psi.evaluate(space, z)?;
        let df = psi.derivative(space, z)?;
        Ok::<_, DiagnosticsError>((f, df, z))
    });
    let mut sum = Complex64::new(0.0, 0.0);
    let mut min_modulus = f64::INFINITY;
    let mut max_modulus = 0.0_f64;
    for s in samples {
        let (f, df, z) = s?;
        min_modulus = min_modulus.min(f.norm());
        max_modulus = max_modulus.max(f.norm());
        sum += df * z / f;
    }
    if !(min_modulus >= CONTOUR_CLEARANCE * max_modulus.max(1.0)) {
        return Err(DiagnosticsError::ZeroNearContour { min_modulus });
    }
    let mean = sum / nodes as f64;
    let count = mean.re.round();
    let residual = (mean.re - count).abs().max(mean.im.abs());
    if residual >= INTEGRALITY_TOL {
        return Err(DiagnosticsError::NonIntegralWinding { value: mean.re, residual });
    }
    Ok(ZeroCount { count: count as i64, winding: mean.re, residual, min_modulus, nodes })
}
