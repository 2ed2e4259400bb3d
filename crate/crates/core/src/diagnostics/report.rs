//! One-call aggregate of the numeric diagnostics for a single operator.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    default_norm_samples, hyponormality_from_section, kernel_defect_max, kernel_modulus_check,
    normaloid_inequality_check, spectral_radius_closed, spectral_radius_gelfand, DiagnosticsError, Tolerances,
};
use crate::par::Exec;
use crate::sampling::disk_pairs;
use crate::wco::WcoSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnoseConfig {
    pub n: usize,
    pub m: usize,
    pub k_max: usize,
    pub pairs: usize,
    pub pair_radius: f64,
    pub seed: u64,
    pub tol: Tolerances,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        DiagnoseConfig {
            n: 256,
            m: 64,
            k_max: 64,
            pairs: 25,
            pair_radius: 0.6,
            seed: 0,
            tol: Tolerances::default(),
            exec: Exec::default(),
        }
    }
}

/// A named verdict with its numeric margin (positive means "holds with room").
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictEntry {
    pub verdict: String,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub commutator_min_eig: f64,
    pub commutator_max_eig: f64,
    pub frobenius_defect: f64,
    pub kernel_defect_max: f64,
    pub norm_lower_bound: f64,
    pub spectral_radius_closed: Option<f64>,
    pub spectral_radius_gelfand: f64,
    pub gelfand_stalled: bool,
    pub verdicts: BTreeMap<String, VerdictEntry>,
    pub config: DiagnoseConfig,
}

/// Run the core metrics: self-commutator spectrum, kernel normality defect on
/// seeded sample pairs, norm lower bound, both spectral radius estimates, and
/// the closed-form kernel conditions when `ψ` is a scaled kernel.
pub fn diagnose(op: &WcoSpec, cfg: &DiagnoseConfig) -> Result<DefectReport, DiagnosticsError> {
    let exec = cfg.exec;
    let t = op.truncate(cfg.n, exec)?;
    let hypo = hyponormality_from_section(&t, cfg.m, cfg.tol.commutator, exec)?;
    let pairs = disk_pairs(cfg.pairs, cfg.pair_radius, cfg.seed);
    let defect = kernel_defect_max(op, &pairs, cfg.n, exec)?;
    let bound = op.norm_lower_bound(&default_norm_samples(op))?;
    let closed = match spectral_radius_closed(op) {
        Ok(r) => Some(r),
        Err(e) if e.is_not_applicable() => None,
        Err(e) => return Err(e),
    };
    let gelfand = spectral_radius_gelfand(&t.matrix, cfg.k_max, exec)?;

    let mut verdicts = BTreeMap::new();
    let mut put = |name: &str, verdict: &str, margin: f64| {
        verdicts.insert(name.to_string(), VerdictEntry { verdict: verdict.to_string(), margin });
    };
    put(
        "hyponormality",
        hypo.class.as_str(),
        (hypo.min_eig / hypo.scale + cfg.tol.commutator).min(cfg.tol.commutator - hypo.max_eig / hypo.scale),
    );
    let kd_ok = defect.max <= cfg.tol.kernel_defect;
    put("kernel_normality", if kd_ok { "CONSISTENT" } else { "VIOLATED" }, cfg.tol.kernel_defect - defect.max);
    match closed {
        Some(r) => {
            let excess = bound / r - 1.0;
            let v = if excess > cfg.tol.geometric { "NOT_NORMALOID" } else { "NORMALOID_CONSISTENT" };
            put("normaloid", v, -excess);
        }
        None => {
            let excess = if gelfand.value > 0.0 { bound / gelfand.value - 1.0 } else { f64::INFINITY };
            let v = if excess <= cfg.tol.gelfand { "NORMALOID_CONSISTENT" } else { "INCONCLUSIVE" };
            put("normaloid", v, cfg.tol.gelfand - excess);
        }
    }
    if let Some(r) = closed {
        let rel = (gelfand.value - r).abs() / r;
        put("radius_agreement", if rel <= cfg.tol.gelfand { "CONSISTENT" } else { "VIOLATED" }, cfg.tol.gelfand - rel);
    }
    if op.psi.as_kernel().is_some() {
        let km = kernel_modulus_check(op, cfg.tol.kernel_modulus, Some(hypo.class))?;
        put("kernel_modulus_normal", km.normal.as_str(), cfg.tol.kernel_modulus - km.difference.abs());
        put("kernel_modulus_cohyponormal", km.cohyponormal.as_str(), km.difference + cfg.tol.kernel_modulus);
        put("kernel_modulus_hyponormal", km.hyponormal.as_str(), cfg.tol.kernel_modulus - km.difference);
        if op.phi.as_lft().is_some() {
            let ni = normaloid_inequality_check(op, cfg.tol.geometric)?;
            put("normaloid_inequality", ni.verdict.as_str(), ni.lhs - ni.rhs);
        }
    }

    Ok(DefectReport {
        commutator_min_eig: hypo.min_eig,
        commutator_max_eig: hypo.max_eig,
        frobenius_defect: hypo.frobenius_defect,
        kernel_defect_max: defect.max,
        norm_lower_bound: bound,
        spectral_radius_closed: closed,
        spectral_radius_gelfand: gelfand.value,
        gelfand_stalled: gelfand.stalled,
        verdicts,
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::moebius::LftMap;
    use crate::series::Space;
    use crate::wco::SymbolSpec;

    #[test]
    fn normal_example_report() {
        let phi = LftMap::real(1.0, 0.5, 0.5, 1.0).unwrap();
        let op = WcoSpec::lft(SymbolSpec::kernel(c64(-0.5, 0.0)), phi, Space::Hardy).unwrap();
        let cfg = DiagnoseConfig { n: 128, m: 32, k_max: 16, ..Default::default() };
        let r = diagnose(&op, &cfg).unwrap();
        assert!(r.commutator_min_eig <= r.commutator_max_eig);
        assert_eq!(r.verdicts["hyponormality"].verdict, "NORMAL_CONSISTENT");
        assert_eq!(r.verdicts["kernel_normality"].verdict, "CONSISTENT");
        assert_eq!(r.verdicts["kernel_modulus_normal"].verdict, "CONSISTENT");
        assert_eq!(r.verdicts["normaloid"].verdict, "NORMALOID_CONSISTENT");
        let mut seq = diagnose(&op, &DiagnoseConfig { exec: Exec::Sequential, ..cfg }).unwrap();
        seq.config = r.config.clone();
        assert_eq!(r, seq);
    }
}
