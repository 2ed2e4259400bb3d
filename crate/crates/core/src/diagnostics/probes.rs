//! Smallest-singular-value trend of finite sections.

use serde::Serialize;

use super::DiagnosticsError;
use crate::linalg::hermitian_spectrum;
use crate::par::Exec;
use crate::wco::WcoSpec;

/// Rows kept per column: the images `ψ φ^j` of the first `N` basis vectors are
/// expanded to `DEFAULT_ROW_FACTOR · N` coefficients so that the section is
/// the restriction of the operator to the first `N` basis vectors rather than
/// a compression of it.
pub const DEFAULT_ROW_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundedBelowTrend {
    BoundedAway,
    TendsToZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundedBelowProbe {
    /// `(N, σ_min)` in the order given.
    pub points: Vec<(usize, f64)>,
    pub floor: f64,
    pub trend: BoundedBelowTrend,
}

/// `σ_min` of `C` restricted to `span{e_0, …, e_{N−1}}` for each `N`, from the
/// spectrum of the Gram matrix `T*T`. The restriction's `σ_min` can only
/// decrease with `N` and bounds the operator's lower bound from above, so a
/// trend to zero is evidence against bounded-below; a stable floor is
/// evidence for it.
pub fn bounded_below_probe(
    op: &WcoSpec,
    orders: &[usize],
    row_factor: usize,
    exec: Exec,
) -> Result<BoundedBelowProbe, DiagnosticsError> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(DiagnosticsError::InvalidArgument("need a nonempty list of positive orders".into()));
    }
    let mut points = Vec::with_capacity(orders.len());
    for &n in orders {
        let t = op.truncate_rect(row_factor.max(1) * n, n, exec)?;
        let eig = hermitian_spectrum(&t.matrix.gram(exec))?;
        let lambda_min = eig.first().copied().unwrap_or(0.0).max(0.0);
        points.push((n, lambda_min.sqrt()));
    }
    let floor = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let first = points.first().expect("nonempty").1;
    let last = points.last().expect("nonempty").1;
    let trend = if points.len() > 1 && last < 0.5 * first {
        BoundedBelowTrend::TendsToZero
    } else {
        BoundedBelowTrend::BoundedAway
    };
    Ok(BoundedBelowProbe { points, floor, trend })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::moebius::LftMap;
    use crate::series::Space;
    use crate::wco::SymbolSpec;

    #[test]
    fn shift_is_an_isometry() {
        let op =
            WcoSpec::lft(SymbolSpec::polynomial(&[c64(0.0, 0.0), c64(1.0, 0.0)]), LftMap::identity(), Space::Hardy)
                .unwrap();
        let p = bounded_below_probe(&op, &[8, 16, 32], 2, Exec::Parallel).unwrap();
        assert!(p.points.iter().all(|(_, s)| (s - 1.0).abs() < 1e-12));
        assert_eq!(p.trend, BoundedBelowTrend::BoundedAway);
    }

    #[test]
    fn half_scaling_collapses() {
        let op = WcoSpec::lft(SymbolSpec::one(), LftMap::scaling(c64(0.5, 0.0)).unwrap(), Space::Hardy).unwrap();
        let p = bounded_below_probe(&op, &[4, 8, 16], 2, Exec::Sequential).unwrap();
        for (n, s) in &p.points {
            let expect = 0.5f64.powi(*n as i32 - 1);
            assert!((s - expect).abs() <= 1e-12 * expect);
        }
        assert_eq!(p.trend, BoundedBelowTrend::TendsToZero);
    }
}
