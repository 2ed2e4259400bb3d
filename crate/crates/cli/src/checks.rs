//! Named checks. Each one computes a verdict, the inequality behind it and a
//! margin; a check passes when its verdict matches the expectation.

use std::cell::OnceCell;

use serde::Serialize;
use serde_json::{json, Value};
use wcolab::diagnostics::{
    boundary_weight_profile, bounded_below_probe, default_norm_samples, eigen_weight_check, hyponormality_from_section,
    identity_residual, kernel_defect_max, kernel_modulus_check, normaloid_inequality_check, normaloid_verdict,
    parabolic_kernel_check, spectral_radius_closed, spectral_radius_gelfand, zero_count, BoundaryProfile,
    BoundedBelowTrend, DiagnosticsError, HyponormalityReport, Tolerances, Verdict, DEFAULT_BOUNDARY_GRID,
    DEFAULT_ROW_FACTOR, MIN_NODES,
};
use wcolab::sampling::{disk_pairs, disk_points};
use wcolab::{Complex64, Exec, MapKind, TruncatedOperator, WcoSpec};

/// Execution order; reports list checks in this order regardless of how they
/// were requested.
pub const CHECK_NAMES: [&str; 17] = [
    "kernel_adjoint",
    "hyponormality",
    "kernel_normality",
    "non_normality",
    "identity",
    "normaloid",
    "radius_agreement",
    "normaloid_inequality",
    "kernel_modulus",
    "parabolic_kernel",
    "boundary_profile",
    "constant_weight",
    "weight_chain",
    "eigen_weight",
    "orbit_fixed_points",
    "zero_free",
    "bounded_below",
];

/// Both the kernel defect and the commutator must reach this size for a
/// perturbation away from the normal weight to count as detected.
pub const DETECTION_FLOOR: f64 = 1e-3;
pub const ADJOINT_POINTS: usize = 8;
pub const ADJOINT_RADIUS: f64 = 0.6;
pub const PAIR_COUNT: usize = 25;
pub const PAIR_RADIUS: f64 = 0.6;
pub const GELFAND_K: usize = 64;
pub const ZERO_RADIUS: f64 = 0.95;
const ORBIT_SAMPLES: usize = 64;
const ORBIT_STEPS: usize = 64;

/// A requested check, written `name` or `name:EXPECTED`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRequest {
    pub name: String,
    pub expect: Option<String>,
}

impl CheckRequest {
    pub fn parse(s: &str) -> Result<Self, String> {
        let (name, expect) = match s.split_once(':') {
            Some((n, e)) => (n.trim(), Some(e.trim().to_string())),
            None => (s.trim(), None),
        };
        if default_expectation(name).is_none() {
            return Err(format!("unknown check {name:?}"));
        }
        if let Some(e) = &expect {
            if !verdicts_of(name).contains(&e.as_str()) {
                return Err(format!("check {name} cannot produce {e:?}; expected one of {:?}", verdicts_of(name)));
            }
        }
        Ok(CheckRequest { name: name.to_string(), expect })
    }

    pub fn expected(&self) -> &str {
        self.expect.as_deref().unwrap_or_else(|| default_expectation(&self.name).expect("validated on parse"))
    }

    /// Render back to the `name:EXPECTED` form.
    pub fn spec(&self) -> String {
        match &self.expect {
            Some(e) => format!("{}:{e}", self.name),
            None => self.name.clone(),
        }
    }
}

fn verdicts_of(name: &str) -> &'static [&'static str] {
    match name {
        "hyponormality" => {
            &["NORMAL_CONSISTENT", "HYPONORMAL_CONSISTENT", "COHYPONORMAL_CONSISTENT", "NEITHER", "NOT_APPLICABLE"]
        }
        "non_normality" => &["DETECTED", "UNDETECTED", "NOT_APPLICABLE"],
        "normaloid" => &["NORMALOID_CONSISTENT", "NOT_NORMALOID", "INCONCLUSIVE", "NOT_APPLICABLE"],
        "constant_weight" => &["CONSTANT", "NOT_CONSTANT", "NOT_APPLICABLE"],
        "zero_free" => &["ZERO_FREE", "HAS_ZEROS", "NOT_APPLICABLE"],
        "bounded_below" => &["BOUNDED_AWAY", "TENDS_TO_ZERO", "NOT_APPLICABLE"],
        _ => &["CONSISTENT", "VIOLATED", "NOT_APPLICABLE"],
    }
}

fn default_expectation(name: &str) -> Option<&'static str> {
    if !CHECK_NAMES.contains(&name) {
        return None;
    }
    Some(verdicts_of(name)[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "NOT_APPLICABLE")]
    NotApplicable,
}

/// The comparison that decided a verdict, with both numeric sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inequality {
    pub statement: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    fn new(statement: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Inequality { statement: statement.into(), lhs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub verdict: String,
    pub expected: String,
    /// Positive when the default-direction inequality holds with room.
    pub margin: Option<f64>,
    pub inequality: Option<Inequality>,
    /// Present exactly on FAIL: the inequality that did not go the expected
    /// way.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violated: Option<Inequality>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub details: Value,
}

struct Observation {
    verdict: String,
    margin: f64,
    inequality: Inequality,
    details: Value,
}

fn holds(ok: bool) -> String {
    Verdict::from_holds(ok).as_str().to_string()
}

/// Settings shared by the checks of one scenario, with the finite section
/// and other expensive intermediates computed at most once.
pub struct Context<'a> {
    pub op: &'a WcoSpec,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub tol: &'a Tolerances,
    pub exec: Exec,
    section: OnceCell<Result<TruncatedOperator, DiagnosticsError>>,
    hypo: OnceCell<Result<HyponormalityReport, DiagnosticsError>>,
    profile: OnceCell<Result<BoundaryProfile, DiagnosticsError>>,
}

impl<'a> Context<'a> {
    pub fn new(op: &'a WcoSpec, n: usize, m: usize, seed: u64, tol: &'a Tolerances, exec: Exec) -> Self {
        Context { op, n, m, seed, tol, exec, section: OnceCell::new(), hypo: OnceCell::new(), profile: OnceCell::new() }
    }

    pub fn section(&self) -> Result<&TruncatedOperator, DiagnosticsError> {
        self.section
            .get_or_init(|| self.op.truncate(self.n, self.exec).map_err(Into::into))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn hypo(&self) -> Result<&HyponormalityReport, DiagnosticsError> {
        self.hypo
            .get_or_init(|| hyponormality_from_section(self.section()?, self.m, self.tol.commutator, self.exec))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn profile(&self) -> Result<&BoundaryProfile, DiagnosticsError> {
        self.profile
            .get_or_init(|| boundary_weight_profile(self.op, DEFAULT_BOUNDARY_GRID, self.tol.boundary))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// Run the requested checks in the fixed order of [`CHECK_NAMES`]. Errors are
/// captured per check.
pub fn run_checks(ctx: &Context, requests: &[CheckRequest]) -> Vec<CheckResult> {
    let mut ordered: Vec<&CheckRequest> = requests.iter().collect();
    ordered.sort_by_key(|r| CHECK_NAMES.iter().position(|n| *n == r.name).unwrap_or(usize::MAX));
    ordered.into_iter().map(|r| run_one(ctx, r)).collect()
}

fn run_one(ctx: &Context, req: &CheckRequest) -> CheckResult {
    let expected = req.expected().to_string();
    let outcome = match req.name.as_str() {
        "kernel_adjoint" => kernel_adjoint(ctx),
        "hyponormality" => hyponormality(ctx),
        "kernel_normality" => kernel_normality(ctx),
        "non_normality" => non_normality(ctx),
        "identity" => identity(ctx),
        "normaloid" => normaloid(ctx),
        "radius_agreement" => radius_agreement(ctx),
        "normaloid_inequality" => normaloid_inequality(ctx),
        "kernel_modulus" => kernel_modulus(ctx),
        "parabolic_kernel" => parabolic_kernel(ctx),
        "boundary_profile" => boundary_profile(ctx),
        "constant_weight" => constant_weight(ctx),
        "weight_chain" => weight_chain(ctx),
        "eigen_weight" => eigen_weight(ctx),
        "orbit_fixed_points" => orbit_fixed_points(ctx),
        "zero_free" => zero_free(ctx),
        "bounded_below" => bounded_below(ctx),
        other => Err(DiagnosticsError::InvalidArgument(format!("unknown check {other}"))),
    };
    match outcome {
        Ok(obs) => {
            let pass = obs.verdict == expected;
            let violated = (!pass).then(|| Inequality {
                statement: format!("expected {expected}, observed {}: {}", obs.verdict, obs.inequality.statement),
                ..obs.inequality.clone()
            });
            CheckResult {
                name: req.name.clone(),
                status: if pass { Status::Pass } else { Status::Fail },
                verdict: obs.verdict,
                expected,
                margin: Some(obs.margin),
                inequality: Some(obs.inequality),
                violated,
                error: None,
                details: obs.details,
            }
        }
        Err(e) if e.is_not_applicable() => {
            let status = if expected == "NOT_APPLICABLE" { Status::Pass } else { Status::NotApplicable };
            CheckResult {
                name: req.name.clone(),
                status,
                verdict: "NOT_APPLICABLE".into(),
                expected,
                margin: None,
                inequality: None,
                violated: None,
                error: Some(e.to_string()),
                details: Value::Null,
            }
        }
        Err(e) => CheckResult {
            name: req.name.clone(),
            status: Status::Fail,
            verdict: "ERROR".into(),
            expected: expected.clone(),
            margin: None,
            inequality: None,
            violated: Some(Inequality::new(format!("expected {expected}, check errored: {e}"), f64::NAN, f64::NAN)),
            error: Some(e.to_string()),
            details: Value::Null,
        },
    }
}

type Outcome = Result<Observation, DiagnosticsError>;

fn kernel_adjoint(ctx: &Context) -> Outcome {
    let t = ctx.section()?;
    let points = disk_points(ADJOINT_POINTS, ADJOINT_RADIUS, ctx.seed);
    let residuals = ctx
        .exec
        .map_slice(&points, |w| ctx.op.kernel_adjoint_residual(t, *w))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let max = residuals.iter().copied().fold(0.0, f64::max);
    let tol = ctx.tol.kernel_adjoint;
    Ok(Observation {
        verdict: holds(max <= tol),
        margin: tol - max,
        inequality: Inequality::new("max_w |T* k_w - conj(psi(w)) K_phi(w)| / |K_phi(w)| <= kernel_adjoint", max, tol),
        details: json!({ "points": points.len(), "radius": ADJOINT_RADIUS, "residuals": residuals }),
    })
}

fn hyponormality(ctx: &Context) -> Outcome {
    let h = ctx.hypo()?;
    let scaled = h.max_abs_eig() / h.scale;
    Ok(Observation {
        verdict: h.class.as_str().into(),
        margin: h.tol - scaled,
        inequality: Inequality::new("max |eig(T*T - TT*)| / max(1, |T|^2) <= commutator", scaled, h.tol),
        details: serde_json::to_value(h).unwrap_or(Value::Null),
    })
}

fn defect_pairs(ctx: &Context) -> Vec<(Complex64, Complex64)> {
    disk_pairs(PAIR_COUNT, PAIR_RADIUS, ctx.seed)
}

fn kernel_normality(ctx: &Context) -> Outcome {
    let d = kernel_defect_max(ctx.op, &defect_pairs(ctx), ctx.n, ctx.exec)?;
    let tol = ctx.tol.kernel_defect;
    Ok(Observation {
        verdict: holds(d.max <= tol),
        margin: tol - d.max,
        inequality: Inequality::new(
            "max |<CK_w, CK_v> - conj(psi(w)) psi(v) K_phi(w)(phi(v))| <= kernel_defect",
            d.max,
            tol,
        ),
        details: json!({ "pairs": PAIR_COUNT, "radius": PAIR_RADIUS, "argmax": [d.argmax.0, d.argmax.1] }),
    })
}

fn non_normality(ctx: &Context) -> Outcome {
    let d = kernel_defect_max(ctx.op, &defect_pairs(ctx), ctx.n, ctx.exec)?;
    let h = ctx.hypo()?;
    let weakest = d.max.min(h.max_abs_eig());
    Ok(Observation {
        verdict: if weakest >= DETECTION_FLOOR { "DETECTED" } else { "UNDETECTED" }.into(),
        margin: weakest - DETECTION_FLOOR,
        inequality: Inequality::new("min(kernel defect, max |commutator eig|) >= 1e-3", weakest, DETECTION_FLOOR),
        details: json!({ "kernel_defect_max": d.max, "commutator_max_abs_eig": h.max_abs_eig() }),
    })
}

fn identity(ctx: &Context) -> Outcome {
    let r = identity_residual(ctx.op)?;
    let tol = ctx.tol.identity;
    Ok(Observation {
        verdict: holds(r <= tol),
        margin: tol - r,
        inequality: Inequality::new("sup |psi (g o phi) - psi(0) |K_sigma(0)|^2| <= identity", r, tol),
        details: Value::Null,
    })
}

fn normaloid(ctx: &Context) -> Outcome {
    let r = normaloid_verdict(ctx.op, &default_norm_samples(ctx.op), ctx.n, GELFAND_K, ctx.tol, ctx.exec)?;
    let (statement, rhs) = match r.radius_closed {
        Some(rc) => ("norm_lower_bound <= r_closed (1 + geometric)", rc * (1.0 + ctx.tol.geometric)),
        None => ("norm_lower_bound <= r_gelfand (1 + gelfand)", r.radius_used * (1.0 + ctx.tol.gelfand)),
    };
    Ok(Observation {
        verdict: r.class.as_str().into(),
        margin: rhs - r.norm_lower_bound,
        inequality: Inequality::new(statement, r.norm_lower_bound, rhs),
        details: json!({
            "radius_closed": r.radius_closed,
            "radius_gelfand": r.radius_gelfand.as_ref().map(|g| g.value),
            "relative_excess": r.relative_excess,
            "certified": r.certified,
        }),
    })
}

fn radius_agreement(ctx: &Context) -> Outcome {
    let closed = spectral_radius_closed(ctx.op)?;
    let g = spectral_radius_gelfand(&ctx.section()?.matrix, GELFAND_K, ctx.exec)?;
    let rel = (g.value - closed).abs() / closed;
    let tol = ctx.tol.gelfand;
    Ok(Observation {
        verdict: holds(rel <= tol),
        margin: tol - rel,
        inequality: Inequality::new("|r_gelfand - r_closed| / r_closed <= gelfand", rel, tol),
        details: json!({ "closed": closed, "gelfand": g.value, "k": GELFAND_K, "stalled": g.stalled }),
    })
}

fn normaloid_inequality(ctx: &Context) -> Outcome {
    let r = normaloid_inequality_check(ctx.op, ctx.tol.geometric)?;
    if r.verdict == Verdict::NotApplicable {
        return Err(DiagnosticsError::NotApplicable("Denjoy-Wolff point is interior".into()));
    }
    let (statement, lhs, rhs) = match r.parabolic_sides {
        Some((l, rr)) if l < rr => ("2|a| >= |phi(a)|^2 (1 + |a|)", l, rr),
        _ => ("(1 - |phi(a)|^2)(1 + |a|)/(1 - |a|) >= phi'(zeta)", r.lhs, r.rhs),
    };
    Ok(Observation {
        verdict: r.verdict.as_str().into(),
        margin: lhs - rhs,
        inequality: Inequality::new(statement, lhs, rhs),
        details: json!({ "lhs": r.lhs, "rhs": r.rhs, "parabolic_sides": r.parabolic_sides }),
    })
}

fn kernel_modulus(ctx: &Context) -> Outcome {
    let evidence = ctx.hypo().ok().map(|h| h.class);
    let r = kernel_modulus_check(ctx.op, ctx.tol.kernel_modulus, evidence)?;
    let tol = ctx.tol.kernel_modulus;
    Ok(Observation {
        verdict: r.normal.as_str().into(),
        margin: tol - r.difference.abs(),
        inequality: Inequality::new("||phi(0)| - |a|| <= kernel_modulus", r.difference.abs(), tol),
        details: serde_json::to_value(&r).unwrap_or(Value::Null),
    })
}

fn parabolic_kernel(ctx: &Context) -> Outcome {
    let r = parabolic_kernel_check(ctx.op, ctx.tol.parabolic)?;
    let gap = (r.a_modulus - r.t_modulus).abs().max((r.t_modulus - r.sigma0_modulus).abs());
    let tol = ctx.tol.parabolic;
    Ok(Observation {
        verdict: r.normal.as_str().into(),
        margin: tol - gap,
        inequality: Inequality::new("max(||a| - |t/(2+t)||, ||t/(2+t)| - |sigma(0)||) <= parabolic", gap, tol),
        details: serde_json::to_value(&r).unwrap_or(Value::Null),
    })
}

fn boundary_profile(ctx: &Context) -> Outcome {
    let p = ctx.profile()?;
    let tol = ctx.tol.boundary;
    Ok(Observation {
        verdict: holds(p.max_abs_difference <= tol),
        margin: tol - p.max_abs_difference,
        inequality: Inequality::new("max | |w(zeta)| - |w(phi(zeta))| | <= boundary", p.max_abs_difference, tol),
        details: json!({
            "grid": p.grid_size,
            "min_forward": p.min_forward,
            "max_forward": p.max_forward,
            "hyponormal_condition": p.hyponormal_condition,
            "cohyponormal_condition": p.cohyponormal_condition,
            "extrema_at_fixed_points": p.extrema_at_fixed_points,
        }),
    })
}

fn constant_weight(ctx: &Context) -> Outcome {
    let p = ctx.profile()?;
    let spread = p.max_modulus - p.min_modulus;
    let allowed = ctx.tol.boundary * p.max_modulus.max(1.0);
    Ok(Observation {
        verdict: if p.constant_modulus { "CONSTANT" } else { "NOT_CONSTANT" }.into(),
        margin: allowed - spread,
        inequality: Inequality::new("max |w| - min |w| on the circle <= boundary max(1, max |w|)", spread, allowed),
        details: json!({
            "min_modulus": p.min_modulus,
            "max_modulus": p.max_modulus,
            "level_set_fraction_min": p.level_set_fraction_min,
            "level_set_fraction_max": p.level_set_fraction_max,
        }),
    })
}

fn weight_chain(ctx: &Context) -> Outcome {
    let p = ctx.profile()?;
    let worst = p.weight_chain.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let allowed = -ctx.tol.boundary * p.max_modulus.max(1.0);
    Ok(Observation {
        verdict: holds(p.chain_nondecreasing),
        margin: worst - allowed,
        inequality: Inequality::new("min_n (|w(phi_n(z2))| - |w(phi_(n-1)(z2))|) >= -boundary", worst, allowed),
        details: json!({ "chain": p.weight_chain }),
    })
}

fn eigen_weight(ctx: &Context) -> Outcome {
    let sup = eigen_weight_check(ctx.op)?;
    let tol = ctx.tol.eigen_weight;
    Ok(Observation {
        verdict: holds(sup <= tol),
        margin: tol - sup,
        inequality: Inequality::new("sup |w(phi(z)) - w(z)| <= eigen_weight", sup, tol),
        details: Value::Null,
    })
}

fn orbit_fixed_points(ctx: &Context) -> Outcome {
    let phi =
        ctx.op.phi.as_lft().ok_or_else(|| DiagnosticsError::HypothesesNotMet("phi is not linear-fractional".into()))?;
    let class = phi.classify()?;
    if !matches!(class.kind, MapKind::HyperbolicAutomorphism | MapKind::ParabolicAutomorphism) {
        return Err(DiagnosticsError::WrongMapClass(class.kind));
    }
    let fixed = class.boundary_fixed_points();
    let mut samples: Vec<Complex64> = wcolab::wco::boundary_grid(ORBIT_SAMPLES).collect();
    samples.extend(fixed.iter().copied());
    let mut mismatches = 0usize;
    let mut finite = 0usize;
    for z in &samples {
        let orbit = phi.orbit(*z, ORBIT_STEPS);
        let is_fixed = fixed.iter().any(|p| (p - z).norm() <= ctx.tol.geometric);
        finite += orbit.is_finite() as usize;
        mismatches += (orbit.is_finite() != is_fixed) as usize;
    }
    Ok(Observation {
        verdict: holds(mismatches == 0),
        margin: -(mismatches as f64),
        inequality: Inequality::new(
            "#(finite orbits at non-fixed points or infinite orbits at fixed points) <= 0",
            mismatches as f64,
            0.0,
        ),
        details: json!({ "samples": samples.len(), "finite_orbits": finite, "fixed_points": fixed }),
    })
}

fn zero_free(ctx: &Context) -> Outcome {
    let z = zero_count(&ctx.op.psi, &ctx.op.space, ZERO_RADIUS, MIN_NODES, ctx.exec)?;
    Ok(Observation {
        verdict: if z.count == 0 { "ZERO_FREE" } else { "HAS_ZEROS" }.into(),
        margin: -(z.count as f64),
        inequality: Inequality::new("#zeros of psi in |z| < 0.95 <= 0", z.count as f64, 0.0),
        details: serde_json::to_value(&z).unwrap_or(Value::Null),
    })
}

/// Section orders used by the bounded-below probe for truncation order `n`.
pub fn probe_orders(n: usize) -> Vec<usize> {
    let mut v = vec![(n / 4).max(1), (n / 2).max(1), n];
    v.dedup();
    v
}

fn bounded_below(ctx: &Context) -> Outcome {
    let p = bounded_below_probe(ctx.op, &probe_orders(ctx.n), DEFAULT_ROW_FACTOR, ctx.exec)?;
    let first = p.points.first().map(|x| x.1).unwrap_or(0.0);
    let last = p.points.last().map(|x| x.1).unwrap_or(0.0);
    Ok(Observation {
        verdict: match p.trend {
            BoundedBelowTrend::BoundedAway => "BOUNDED_AWAY",
            BoundedBelowTrend::TendsToZero => "TENDS_TO_ZERO",
        }
        .into(),
        margin: last - 0.5 * first,
        inequality: Inequality::new("sigma_min(largest N) >= 0.5 sigma_min(smallest N)", last, 0.5 * first),
        details: json!({ "points": p.points, "floor": p.floor, "row_factor": DEFAULT_ROW_FACTOR }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_syntax() {
        let r = CheckRequest::parse("normaloid:NOT_NORMALOID").unwrap();
        assert_eq!(r.expected(), "NOT_NORMALOID");
        assert_eq!(r.spec(), "normaloid:NOT_NORMALOID");
        assert_eq!(CheckRequest::parse("kernel_adjoint").unwrap().expected(), "CONSISTENT");
        assert!(CheckRequest::parse("kernel_adjoint:NOT_NORMALOID").is_err());
        assert!(CheckRequest::parse("unknown").is_err());
    }
}
