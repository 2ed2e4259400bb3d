//! Self-commutator blocks and the hyponormality verdict.

use num_complex::Complex64;
use serde::Serialize;

use super::DiagnosticsError;
use crate::linalg::{hermitian_spectrum, CMatrix};
use crate::par::Exec;
use crate::wco::{TruncatedOperator, WcoSpec};

/// Leading `m × m` block of `T*T − TT*`, symmetrized.
pub fn self_commutator(t: &TruncatedOperator, m: usize, exec: Exec) -> Result<CMatrix, DiagnosticsError> {
    let a = &t.matrix;
    let n = a.rows().min(a.cols());
    if 2 * m > n {
        return Err(DiagnosticsError::BlockTooLarge { m, n });
    }
    // Rows of the leading block, stored contiguously for the TT* term.
    let rows: Vec<Vec<Complex64>> = (0..m).map(|i| (0..a.cols()).map(|k| a[(i, k)]).collect()).collect();
    let columns = exec.map(m, |j| {
        (0..m)
            .map(|i| {
                let tt: Complex64 = a.col(i).iter().zip(a.col(j)).map(|(x, y)| x.conj() * y).sum();
                let tts: Complex64 = rows[i].iter().zip(&rows[j]).map(|(x, y)| x * y.conj()).sum();
                tt - tts
            })
            .collect::<Vec<_>>()
    });
    let mut h = CMatrix::from_columns(columns)?;
    h.symmetrize();
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HyponormalityClass {
    NormalConsistent,
    HyponormalConsistent,
    CohyponormalConsistent,
    Neither,
}

impl HyponormalityClass {
    pub fn as_str(self) -> &'static str {
        match self {
            HyponormalityClass::NormalConsistent => "NORMAL_CONSISTENT",
            HyponormalityClass::HyponormalConsistent => "HYPONORMAL_CONSISTENT",
            HyponormalityClass::CohyponormalConsistent => "COHYPONORMAL_CONSISTENT",
            HyponormalityClass::Neither => "NEITHER",
        }
    }

    pub fn is_normal(self) -> bool {
        self == HyponormalityClass::NormalConsistent
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyponormalityReport {
    pub class: HyponormalityClass,
    pub min_eig: f64,
    pub max_eig: f64,
    /// `max(1, ‖T‖²)`; the verdict compares `eig / scale` with the tolerance.
    pub scale: f64,
    pub frobenius_defect: f64,
    pub n: usize,
    pub m: usize,
    pub tol: f64,
}

impl HyponormalityReport {
    pub fn max_abs_eig(&self) -> f64 {
        self.min_eig.abs().max(self.max_eig.abs())
    }
}

/// Classify from an existing section.
pub fn hyponormality_from_section(
    t: &TruncatedOperator,
    m: usize,
    tol: f64,
    exec: Exec,
) -> Result<HyponormalityReport, DiagnosticsError> {
    let h = self_commutator(t, m, exec)?;
    let eig = hermitian_spectrum(&h)?;
    let min_eig = eig.first().copied().unwrap_or(0.0);
    let max_eig = eig.last().copied().unwrap_or(0.0);
    let scale = t.matrix.spectral_norm().value.powi(2).max(1.0);
    let hypo = min_eig / scale >= -tol;
    let cohypo = max_eig / scale <= tol;
    let class = match (hypo, cohypo) {
        (true, true) => HyponormalityClass::NormalConsistent,
        (true, false) => HyponormalityClass::HyponormalConsistent,
        (false, true) => HyponormalityClass::CohyponormalConsistent,
        (false, false) => HyponormalityClass::Neither,
    };
    Ok(HyponormalityReport {
        class,
        min_eig,
        max_eig,
        scale,
        frobenius_defect: h.frobenius_norm(),
        n: t.matrix.cols(),
        m,
        tol,
    })
}

/// Build the `n × n` section and classify its leading `m × m` self-commutator.
pub fn hyponormality_verdict(
    op: &WcoSpec,
    n: usize,
    m: usize,
    tol: f64,
    exec: Exec,
) -> Result<HyponormalityReport, DiagnosticsError> {
    if 2 * m > n {
        return Err(DiagnosticsError::BlockTooLarge { m, n });
    }
    let t = op.truncate(n, exec)?;
    hyponormality_from_section(&t, m, tol, exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::LftMap;
    use crate::series::Space;
    use crate::wco::SymbolSpec;
    use crate::{c64, Complex64};

    const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
    const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

    fn hyperbolic() -> LftMap {
        LftMap::real(1.0, 0.5, 0.5, 1.0).unwrap()
    }

    #[test]
    fn diagonal_is_normal() {
        let op = WcoSpec::lft(SymbolSpec::one(), LftMap::scaling(c64(0.6, 0.0)).unwrap(), Space::Hardy).unwrap();
        let t = op.truncate(32, Exec::Sequential).unwrap();
        assert_eq!(self_commutator(&t, 16, Exec::Sequential).unwrap().max_abs(), 0.0);
        let r = hyponormality_verdict(&op, 32, 16, 1e-6, Exec::Parallel).unwrap();
        assert_eq!(r.class, HyponormalityClass::NormalConsistent);
    }

    #[test]
    fn shift_is_hyponormal() {
        let op = WcoSpec::lft(SymbolSpec::polynomial(&[ZERO, ONE]), LftMap::identity(), Space::Hardy).unwrap();
        let t = op.truncate(16, Exec::Sequential).unwrap();
        let h = self_commutator(&t, 8, Exec::Sequential).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(h[(i, j)], if i == 0 && j == 0 { ONE } else { ZERO });
            }
        }
        let r = hyponormality_from_section(&t, 8, 1e-6, Exec::Sequential).unwrap();
        assert_eq!(r.class, HyponormalityClass::HyponormalConsistent);
        assert_eq!((r.min_eig, r.max_eig), (0.0, 1.0));
    }

    #[test]
    fn block_size_is_checked() {
        let op = WcoSpec::lft(SymbolSpec::one(), LftMap::identity(), Space::Hardy).unwrap();
        let t = op.truncate(10, Exec::Sequential).unwrap();
        assert_eq!(self_commutator(&t, 6, Exec::Sequential), Err(DiagnosticsError::BlockTooLarge { m: 6, n: 10 }));
    }

    #[test]
    fn normal_kernel_weight_has_tiny_commutator() {
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), hyperbolic(), Space::Hardy).unwrap();
        let t = op.truncate(256, Exec::Parallel).unwrap();
        assert!(self_commutator(&t, 64, Exec::Parallel).unwrap().max_abs() <= 1e-7);
        let pert = op.with_psi(SymbolSpec::kernel(c64(-0.5, 0.0)).plus(SymbolSpec::polynomial(&[ZERO, c64(0.1, 0.0)])));
        let r = hyponormality_verdict(&pert.unwrap(), 256, 64, 1e-4, Exec::Parallel).unwrap();
        assert_eq!(r.class, HyponormalityClass::Neither);
    }
}
