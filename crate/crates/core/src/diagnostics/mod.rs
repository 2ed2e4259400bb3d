//! Numerical verdicts for weighted composition operators.
//!
//! Finite sections are evidence, not proof: verdicts named `*_CONSISTENT` say
//! only that the computed data does not contradict the property. The
//! closed-form rule-outs (norm bound above the spectral radius, kernel modulus
//! and translation-number conditions) are certified because they rest on
//! exact formulas.

mod boundary;
mod commutator;
mod kernel_checks;
mod probes;
mod radius;
mod report;
mod zeros;

pub use boundary::{
    boundary_weight_profile, eigen_weight_check, identity_residual, normal_symbol_for, BoundaryProfile, BoundaryWeight,
    NormalSymbol, DEFAULT_BOUNDARY_GRID,
};
pub use commutator::{
    hyponormality_from_section, hyponormality_verdict, self_commutator, HyponormalityClass, HyponormalityReport,
};
pub use kernel_checks::{
    composed_kernel_series, kernel_defect_max, kernel_modulus_check, normality_defect_kernel,
    normaloid_inequality_check, parabolic_kernel_check, KernelDefectSummary, KernelModulusReport, NormaloidInequality,
    ParabolicKernelReport,
};
pub use probes::{bounded_below_probe, BoundedBelowProbe, BoundedBelowTrend, DEFAULT_ROW_FACTOR};
pub use radius::{
    default_norm_samples, normaloid_verdict, spectral_radius_closed, spectral_radius_gelfand, GelfandEstimate,
    NormaloidClass, NormaloidReport,
};
pub use report::{diagnose, DefectReport, DiagnoseConfig};
pub use zeros::{zero_count, ZeroCount, MIN_NODES};

use serde::Serialize;

use crate::linalg::LinalgError;
use crate::moebius::{MapKind, MoebiusError};
use crate::series::SeriesError;
use crate::wco::WcoError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("block size {m} exceeds half the truncation order {n}")]
    BlockTooLarge { m: usize, n: usize },
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("phi is not a parabolic non-automorphism")]
    NotParabolicNonAutomorphism,
    #[error("phi is not a disk automorphism")]
    NotAutomorphism,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("wrong map class {0:?}")]
    WrongMapClass(MapKind),
    #[error("psi has a zero within 1e-6 of the contour (min |psi| = {min_modulus:e})")]
    ZeroNearContour { min_modulus: f64 },
    #[error("winding number {value} is not an integer (residual {residual})")]
    NonIntegralWinding { value: f64, residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Wco(#[from] WcoError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl DiagnosticsError {
    /// Errors that mean "this check does not apply here" rather than "this
    /// check failed".
    pub fn is_not_applicable(&self) -> bool {
        matches!(
            self,
            DiagnosticsError::HypothesesNotMet(_)
                | DiagnosticsError::NotParabolicNonAutomorphism
                | DiagnosticsError::NotAutomorphism
                | DiagnosticsError::NotApplicable(_)
                | DiagnosticsError::WrongMapClass(_)
        )
    }
}

/// Outcome of a necessary-condition test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Violated,
    NotApplicable,
}

impl Verdict {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Verdict::Consistent
        } else {
            Verdict::Violated
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Violated => "VIOLATED",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        }
    }
}

/// Tolerances used across the checks, keyed by the names accepted on the
/// command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub commutator: f64,
    pub kernel_defect: f64,
    pub identity: f64,
    pub kernel_adjoint: f64,
    pub gelfand: f64,
    pub boundary: f64,
    pub eigen_weight: f64,
    pub kernel_modulus: f64,
    pub parabolic: f64,
    pub geometric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            commutator: 1e-6,
            kernel_defect: 1e-7,
            identity: 1e-10,
            kernel_adjoint: 1e-8,
            gelfand: 0.05,
            boundary: 1e-9,
            eigen_weight: 1e-9,
            kernel_modulus: 1e-12,
            parabolic: 1e-10,
            geometric: 1e-10,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 10] = [
        "commutator",
        "kernel_defect",
        "identity",
        "kernel_adjoint",
        "gelfand",
        "boundary",
        "eigen_weight",
        "kernel_modulus",
        "parabolic",
        "geometric",
    ];

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "commutator" => &mut self.commutator,
            "kernel_defect" => &mut self.kernel_defect,
            "identity" => &mut self.identity,
            "kernel_adjoint" => &mut self.kernel_adjoint,
            "gelfand" => &mut self.gelfand,
            "boundary" => &mut self.boundary,
            "eigen_weight" => &mut self.eigen_weight,
            "kernel_modulus" => &mut self.kernel_modulus,
            "parabolic" => &mut self.parabolic,
            "geometric" => &mut self.geometric,
            _ => return None,
        })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.clone().slot(key).map(|v| *v)
    }

    /// Set one tolerance; fails on an unknown key or a non-positive value.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), DiagnosticsError> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(DiagnosticsError::InvalidArgument(format!("tolerance {key} = {value} must be positive")));
        }
        let slot = self
            .slot(key)
            .ok_or_else(|| DiagnosticsError::InvalidArgument(format!("unknown tolerance key {key:?}")))?;
        *slot = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_keys_round_trip() {
        let mut t = Tolerances::default();
        for key in Tolerances::KEYS {
            assert!(t.get(key).is_some());
        }
        t.set("gelfand", 0.1).unwrap();
        assert_eq!(t.gelfand, 0.1);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("identity", -1.0).is_err());
    }
}
