//! Report assembly: running scenarios and presets, sweeps, and serialization.

use serde::Serialize;
use wcolab::diagnostics::{
    bounded_below_probe, diagnose, hyponormality_from_section, kernel_defect_max, spectral_radius_closed,
    spectral_radius_gelfand, DefectReport, DiagnoseConfig, DEFAULT_ROW_FACTOR,
};
use wcolab::sampling::{disk_pairs, disk_points};
use wcolab::{Exec, MapClassification};

use crate::checks::{
    run_checks, CheckResult, Context, Status, ADJOINT_POINTS, ADJOINT_RADIUS, GELFAND_K, PAIR_COUNT, PAIR_RADIUS,
};
use crate::presets::Preset;
use crate::scenario::{resolve, Scenario, ScenarioDoc};
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Top-level wrapper carrying the version and the only nondeterministic
/// field, the timestamp.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub version: &'static str,
    pub timestamp: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(body: T) -> Self {
        Envelope { version: VERSION, timestamp: chrono::Utc::now().to_rfc3339(), body }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self).map_err(CliError::Json)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
}

impl Summary {
    fn of<'a>(checks: impl IntoIterator<Item = &'a CheckResult>) -> Self {
        let mut s = Summary { pass: 0, fail: 0, not_applicable: 0 };
        for c in checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::NotApplicable => s.not_applicable += 1,
            }
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.fail == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: ScenarioDoc,
    /// `None` for series symbols.
    pub classification: Option<MapClassification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defects: Option<DefectReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defects_error: Option<String>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Vec<ConvergenceRow>>,
    pub summary: Summary,
    pub all_expectations_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub preset: &'static str,
    pub statement: &'static str,
    pub expectation: &'static str,
    pub seed: u64,
    pub runs: Vec<Report>,
    pub summary: Summary,
    pub all_expectations_hold: bool,
}

/// One row of a convergence table: `index` is `N` for section metrics and
/// `k` for the Gelfand sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub index: usize,
    pub metric: String,
    pub value: f64,
}

pub fn classification_of(s: &Scenario) -> Option<MapClassification> {
    s.op.phi.as_lft().and_then(|m| m.classify().ok())
}

fn defect_config(s: &Scenario, exec: Exec) -> DiagnoseConfig {
    DiagnoseConfig {
        n: s.n(),
        m: s.m(),
        k_max: GELFAND_K,
        pairs: PAIR_COUNT,
        pair_radius: PAIR_RADIUS,
        seed: s.seed(),
        tol: s.tol.clone(),
        exec,
    }
}

/// Run a scenario's checks, optionally with the full defect report.
pub fn run(s: &Scenario, with_defects: bool, exec: Exec) -> Report {
    let ctx = Context::new(&s.op, s.n(), s.m(), s.seed(), &s.tol, exec);
    let checks = run_checks(&ctx, &s.checks);
    let (defects, defects_error) = if with_defects {
        match diagnose(&s.op, &defect_config(s, exec)) {
            Ok(d) => (Some(d), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let summary = Summary::of(&checks);
    Report {
        scenario: s.doc.clone(),
        classification: classification_of(s),
        defects,
        defects_error,
        checks,
        convergence: None,
        all_expectations_hold: summary.ok(),
        summary,
    }
}

/// Run every scenario of a preset. Scenarios run concurrently; the result
/// order is the preset's order.
pub fn verify(preset: &'static Preset, seed: u64, exec: Exec) -> Result<VerifyReport, CliError> {
    let scenarios = preset.scenarios(seed).into_iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
    let runs = exec.map_slice(&scenarios, |s| run(s, preset.full_report, exec));
    let summary = Summary::of(runs.iter().flat_map(|r| &r.checks));
    let ok = runs.iter().all(|r| r.all_expectations_hold) && summary.ok();
    Ok(VerifyReport {
        preset: preset.id,
        statement: preset.statement,
        expectation: preset.expectation,
        seed,
        runs,
        summary,
        all_expectations_hold: ok,
    })
}

/// Re-run the section metrics for each order. With `k_max`, the Gelfand
/// sequence on the largest section is appended with `index = k`. Metrics that
/// fail at an order produce no row for it.
pub fn sweep(
    s: &Scenario,
    orders: &[usize],
    k_max: Option<usize>,
    exec: Exec,
) -> Result<Vec<ConvergenceRow>, CliError> {
    if orders.is_empty() || orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("orders must be a nonempty ascending list".into()));
    }
    let mut rows = Vec::new();
    let mut push =
        |index: usize, metric: &str, value: f64| rows.push(ConvergenceRow { index, metric: metric.to_string(), value });
    let pairs = disk_pairs(PAIR_COUNT, PAIR_RADIUS, s.seed());
    let points = disk_points(ADJOINT_POINTS, ADJOINT_RADIUS, s.seed());
    for &n in orders {
        let t = s.op.truncate(n, exec)?;
        // A metric that cannot be evaluated at a small order (for example an
        // unresolved series tail) is left out of that order's rows.
        let kernel_adjoint = points
            .iter()
            .map(|w| s.op.kernel_adjoint_residual(&t, *w))
            .collect::<Result<Vec<_>, _>>()
            .map(|r| r.into_iter().fold(0.0, f64::max));
        if let Ok(v) = kernel_adjoint {
            push(n, "kernel_adjoint_max_residual", v);
        }
        if let Ok(d) = kernel_defect_max(&s.op, &pairs, n, exec) {
            push(n, "kernel_defect_max", d.max);
        }
        let m = s.m().min(n / 2).max(1);
        if 2 * m <= n {
            if let Ok(h) = hyponormality_from_section(&t, m, s.tol.commutator, exec) {
                push(n, "commutator_max_abs_eig", h.max_abs_eig());
            }
        }
        if let Ok(probe) = bounded_below_probe(&s.op, &[n], DEFAULT_ROW_FACTOR, exec) {
            push(n, "sigma_min", probe.floor);
        }
    }
    if let Some(k) = k_max {
        let n = *orders.last().expect("nonempty");
        let g = spectral_radius_gelfand(&s.op.truncate(n, exec)?.matrix, k, exec)?;
        for (i, v) in g.sequence.iter().enumerate() {
            push(i + 1, "gelfand_radius", *v);
        }
        if let Ok(r) = spectral_radius_closed(&s.op) {
            push(0, "spectral_radius_closed", r);
        }
    }
    Ok(rows)
}

/// `n_or_k,metric,value`
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n_or_k,metric,value\n");
    for r in rows {
        out.push_str(&format!("{},{},{:e}\n", r.index, r.metric, r.value));
    }
    out
}

/// A report with its sweep table attached.
pub fn full_report(
    s: &Scenario,
    orders: Option<&[usize]>,
    k_max: Option<usize>,
    exec: Exec,
) -> Result<Report, CliError> {
    let mut r = run(s, true, exec);
    if let Some(orders) = orders {
        r.convergence = Some(sweep(s, orders, k_max, exec)?);
    }
    Ok(r)
}

/// Drop the timestamp so two reports can be compared byte for byte.
pub fn strip_timestamp(json: &str) -> Result<String, CliError> {
    let mut v: serde_json::Value = serde_json::from_str(json).map_err(CliError::Json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timestamp");
    }
    serde_json::to_string_pretty(&v).map_err(CliError::Json)
}
