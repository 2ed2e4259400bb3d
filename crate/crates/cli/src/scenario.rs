//! Scenario documents: the JSON schema, parsing with field paths, and
//! resolution into a validated operator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use wcolab::diagnostics::{normal_symbol_for, Tolerances};
use wcolab::wco::{SelfMap, SymbolSpec, WcoError, WcoSpec};
use wcolab::{c64, Complex64, LftMap, PowerSeries, RationalPower, Space};

use crate::checks::{CheckRequest, CHECK_NAMES};
use crate::presets;
use crate::CliError;

/// A complex number written as `[re, im]`.
pub type Pair = [f64; 2];

pub const DEFAULT_N: usize = 256;
pub const DEFAULT_M: usize = 64;

fn default_n() -> usize {
    DEFAULT_N
}

fn default_m() -> usize {
    DEFAULT_M
}

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn cx(p: &Pair) -> Complex64 {
    c64(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    pub space: SpaceDoc,
    pub phi: PhiDoc,
    pub psi: PsiDoc,
    #[serde(rename = "N", default = "default_n")]
    pub n: usize,
    #[serde(rename = "M", default = "default_m")]
    pub m: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default)]
    pub tol: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpaceDoc {
    Hardy,
    Bergman(BergmanDoc),
    Weighted(WeightedDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BergmanDoc {
    #[serde(default)]
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedDoc {
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PhiDoc {
    Lft(LftDoc),
    Series(CoeffsDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LftDoc {
    pub coeffs: [Pair; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffsDoc {
    pub coeffs: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum PsiDoc {
    Poly(CoeffsDoc),
    Kernel(KernelDoc),
    RationalPower(RationalPowerDoc),
    Product(FactorsDoc),
    Sum(TermsDoc),
    /// `ψ(0) K_{σ(0)}`, the weight that makes `C_{ψ,φ}` normal for a
    /// hyperbolic or parabolic automorphism `φ`.
    NormalAuto(NormalAutoDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDoc {
    pub w: Pair,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalPowerDoc {
    pub p: Pair,
    pub q: Pair,
    pub u: Pair,
    pub v: Pair,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorsDoc {
    pub factors: Vec<PsiDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermsDoc {
    pub terms: Vec<PsiDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalAutoDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi0: Option<Pair>,
}

impl SpaceDoc {
    pub fn from_space(space: &Space) -> Self {
        match space {
            Space::Hardy => SpaceDoc::Hardy,
            Space::Bergman { alpha } => SpaceDoc::Bergman(BergmanDoc { alpha: *alpha }),
            Space::Weighted { beta } => SpaceDoc::Weighted(WeightedDoc { beta: beta.clone() }),
        }
    }

    fn resolve(&self) -> Result<Space, CliError> {
        let space = match self {
            SpaceDoc::Hardy => Space::Hardy,
            SpaceDoc::Bergman(b) => Space::Bergman { alpha: b.alpha },
            SpaceDoc::Weighted(w) => Space::Weighted { beta: w.beta.clone() },
        };
        space.validate().map_err(|e| CliError::schema("space", e.to_string()))?;
        Ok(space)
    }
}

impl PhiDoc {
    pub fn from_lft(m: &LftMap) -> Self {
        let c = m.coeffs();
        PhiDoc::Lft(LftDoc { coeffs: [pair(c[0]), pair(c[1]), pair(c[2]), pair(c[3])] })
    }

    fn resolve(&self) -> Result<SelfMap, CliError> {
        match self {
            PhiDoc::Lft(LftDoc { coeffs }) => {
                let [a, b, c, d] = coeffs.each_ref().map(cx);
                let m = LftMap::new(a, b, c, d).map_err(|e| CliError::schema("phi.coeffs", e.to_string()))?;
                Ok(SelfMap::Lft(m))
            }
            PhiDoc::Series(CoeffsDoc { coeffs }) => {
                if coeffs.is_empty() {
                    return Err(CliError::schema("phi.coeffs", "series needs at least one coefficient"));
                }
                Ok(SelfMap::Series(PowerSeries::new(coeffs.iter().map(cx).collect())))
            }
        }
    }
}

impl PsiDoc {
    pub fn constant(c: f64) -> Self {
        PsiDoc::Poly(CoeffsDoc { coeffs: vec![[c, 0.0]] })
    }

    pub fn kernel(w: Complex64) -> Self {
        PsiDoc::Kernel(KernelDoc { w: pair(w), scale: None })
    }

    pub fn from_symbol(psi: &SymbolSpec) -> Self {
        match psi {
            SymbolSpec::Polynomial { coeffs } => {
                PsiDoc::Poly(CoeffsDoc { coeffs: coeffs.iter().copied().map(pair).collect() })
            }
            SymbolSpec::ScaledKernel { scale, w } => {
                PsiDoc::Kernel(KernelDoc { w: pair(*w), scale: (*scale != c64(1.0, 0.0)).then(|| pair(*scale)) })
            }
            SymbolSpec::RationalPower(r) => PsiDoc::RationalPower(RationalPowerDoc {
                p: pair(r.p),
                q: pair(r.q),
                u: pair(r.u),
                v: pair(r.v),
                s: r.s,
            }),
            SymbolSpec::Product { factors } => {
                PsiDoc::Product(FactorsDoc { factors: factors.iter().map(Self::from_symbol).collect() })
            }
            SymbolSpec::Sum { terms } => PsiDoc::Sum(TermsDoc { terms: terms.iter().map(Self::from_symbol).collect() }),
        }
    }

    fn resolve(&self, path: &str, phi: &SelfMap, space: &Space) -> Result<SymbolSpec, CliError> {
        Ok(match self {
            PsiDoc::Poly(CoeffsDoc { coeffs }) => {
                if coeffs.is_empty() {
                    return Err(CliError::schema(format!("{path}.coeffs"), "polynomial needs a coefficient"));
                }
                SymbolSpec::polynomial(&coeffs.iter().map(cx).collect::<Vec<_>>())
            }
            PsiDoc::Kernel(KernelDoc { w, scale }) => {
                SymbolSpec::scaled_kernel(scale.as_ref().map(cx).unwrap_or(c64(1.0, 0.0)), cx(w))
            }
            PsiDoc::RationalPower(RationalPowerDoc { p, q, u, v, s }) => {
                SymbolSpec::RationalPower(RationalPower { p: cx(p), q: cx(q), u: cx(u), v: cx(v), s: *s })
            }
            PsiDoc::Product(FactorsDoc { factors }) => SymbolSpec::Product {
                factors: factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.resolve(&format!("{path}.factors[{i}]"), phi, space))
                    .collect::<Result<_, _>>()?,
            },
            PsiDoc::Sum(TermsDoc { terms }) => SymbolSpec::Sum {
                terms: terms
                    .iter()
                    .enumerate()
                    .map(|(i, f)| f.resolve(&format!("{path}.terms[{i}]"), phi, space))
                    .collect::<Result<_, _>>()?,
            },
            PsiDoc::NormalAuto(NormalAutoDoc { psi0 }) => {
                let m =
                    phi.as_lft().ok_or_else(|| CliError::schema(path, "normal-auto needs a linear-fractional phi"))?;
                let psi0 = psi0.as_ref().map(cx).unwrap_or(c64(1.0, 0.0));
                normal_symbol_for(m, psi0, space).map_err(|e| CliError::schema(path, e.to_string()))?.psi
            }
        })
    }
}

/// A parsed and validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub doc: ScenarioDoc,
    pub op: WcoSpec,
    pub checks: Vec<CheckRequest>,
    pub tol: Tolerances,
}

impl Scenario {
    pub fn n(&self) -> usize {
        self.doc.n
    }

    pub fn m(&self) -> usize {
        self.doc.m
    }

    pub fn seed(&self) -> u64 {
        self.doc.seed
    }
}

/// Parse a JSON scenario document. Structural errors carry the path of the
/// offending field.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScenarioDoc = match serde_path_to_error::deserialize(de) {
        Ok(d) => d,
        Err(e) => {
            let path = e.path().to_string();
            let coarse = CliError::Schema { path: path.clone(), message: e.into_inner().to_string() };
            return Err(refine_error(text, &path).unwrap_or(coarse));
        }
    };
    resolve(doc)
}

#[derive(Clone, Copy)]
enum Node {
    Space,
    Phi,
    Psi,
}

/// Tagged unions buffer their content during deserialization, which hides
/// the position of an error inside them. Re-deserialize the failing subtree
/// variant by variant to recover the full path.
fn refine_error(text: &str, path: &str) -> Option<CliError> {
    let root: serde_json::Value = serde_json::from_str(text).ok()?;
    let top = path.split(['.', '[']).next()?;
    let node = match top {
        "space" => Node::Space,
        "phi" => Node::Phi,
        "psi" => Node::Psi,
        _ => return None,
    };
    locate(root.get(top)?, top.to_string(), node)
}

fn tagged<T: serde::de::DeserializeOwned>(v: &serde_json::Value, path: &str) -> Result<T, CliError> {
    let mut body = v.clone();
    if let Some(obj) = body.as_object_mut() {
        obj.remove("type");
    }
    serde_path_to_error::deserialize(body).map_err(|e| {
        let inner = e.path().to_string();
        let full = if inner == "." { path.to_string() } else { format!("{path}.{inner}") };
        CliError::Schema { path: full.replace(".[", "["), message: e.into_inner().to_string() }
    })
}

fn locate(v: &serde_json::Value, path: String, node: Node) -> Option<CliError> {
    let Some(obj) = v.as_object() else {
        return Some(CliError::schema(path, "expected an object with a \"type\" field"));
    };
    let Some(kind) = obj.get("type").and_then(|t| t.as_str()) else {
        return Some(CliError::schema(format!("{path}.type"), "missing or non-string \"type\""));
    };
    let unknown = |known: &[&str]| {
        Some(CliError::schema(format!("{path}.type"), format!("unknown type {kind:?}, expected one of {known:?}")))
    };
    let err = |r: Result<(), CliError>| r.err();
    match (node, kind) {
        (Node::Space, "hardy") => {
            err(tagged::<serde_json::Map<String, serde_json::Value>>(v, &path).and_then(|m| match m.keys().next() {
                Some(k) => Err(CliError::schema(format!("{path}.{k}"), "unknown field")),
                None => Ok(()),
            }))
        }
        (Node::Space, "bergman") => err(tagged::<BergmanDoc>(v, &path).map(drop)),
        (Node::Space, "weighted") => err(tagged::<WeightedDoc>(v, &path).map(drop)),
        (Node::Space, _) => unknown(&["hardy", "bergman", "weighted"]),
        (Node::Phi, "lft") => err(tagged::<LftDoc>(v, &path).map(drop)),
        (Node::Phi, "series") => err(tagged::<CoeffsDoc>(v, &path).map(drop)),
        (Node::Phi, _) => unknown(&["lft", "series"]),
        (Node::Psi, "poly") => err(tagged::<CoeffsDoc>(v, &path).map(drop)),
        (Node::Psi, "kernel") => err(tagged::<KernelDoc>(v, &path).map(drop)),
        (Node::Psi, "rational-power") => err(tagged::<RationalPowerDoc>(v, &path).map(drop)),
        (Node::Psi, "normal-auto") => err(tagged::<NormalAutoDoc>(v, &path).map(drop)),
        (Node::Psi, "product" | "sum") => {
            let field = if kind == "product" { "factors" } else { "terms" };
            match obj.get(field).and_then(|f| f.as_array()) {
                Some(items) => items
                    .iter()
                    .enumerate()
                    .find_map(|(i, x)| locate(x, format!("{path}.{field}[{i}]"), Node::Psi))
                    .or_else(|| {
                        obj.keys()
                            .find(|k| *k != "type" && *k != field)
                            .map(|k| CliError::schema(format!("{path}.{k}"), "unknown field"))
                    }),
                None => Some(CliError::schema(format!("{path}.{field}"), "expected an array")),
            }
        }
        (Node::Psi, _) => unknown(&["poly", "kernel", "rational-power", "product", "sum", "normal-auto"]),
    }
}

/// Validate a document: finite numbers, `N ≥ 2M`, known checks and
/// tolerance keys, a self-map `φ` and a bounded `ψ`.
pub fn resolve(doc: ScenarioDoc) -> Result<Scenario, CliError> {
    let numbers = serde_json::to_value(&doc).map_err(CliError::Json)?;
    if let Some(path) = first_non_finite(&numbers, String::new()) {
        return Err(CliError::schema(path, "number must be finite"));
    }
    if doc.m == 0 {
        return Err(CliError::schema("M", "block size must be positive"));
    }
    if doc.n < 2 * doc.m {
        return Err(CliError::schema("N", format!("N = {} must be at least 2M = {}", doc.n, 2 * doc.m)));
    }
    let mut tol = Tolerances::default();
    for (key, value) in &doc.tol {
        tol.set(key, *value).map_err(|e| CliError::schema(format!("tol.{key}"), e.to_string()))?;
    }
    let checks = match (&doc.checks, &doc.preset) {
        (Some(_), Some(_)) => return Err(CliError::schema("preset", "give either checks or preset, not both")),
        (Some(list), None) => list
            .iter()
            .enumerate()
            .map(|(i, s)| CheckRequest::parse(s).map_err(|m| CliError::schema(format!("checks[{i}]"), m)))
            .collect::<Result<Vec<_>, _>>()?,
        (None, Some(id)) => {
            let preset =
                presets::find(id).ok_or_else(|| CliError::schema("preset", format!("unknown preset {id:?}")))?;
            preset.checks()
        }
        (None, None) => CHECK_NAMES.iter().map(|n| CheckRequest { name: n.to_string(), expect: None }).collect(),
    };
    let space = doc.space.resolve()?;
    let phi = doc.phi.resolve()?;
    if let SelfMap::Lft(m) = &phi {
        if !m.is_self_map() {
            return Err(CliError::NotSelfMap("the image of the disk under phi leaves the disk".into()));
        }
    }
    let psi = doc.psi.resolve("psi", &phi, &space)?;
    let op = WcoSpec::new(psi, phi, space).map_err(|e| match e {
        WcoError::NotSelfMap(m) => CliError::NotSelfMap(m),
        e => CliError::schema("psi", e.to_string()),
    })?;
    Ok(Scenario { doc, op, checks, tol })
}

fn first_non_finite(v: &serde_json::Value, path: String) -> Option<String> {
    match v {
        serde_json::Value::Number(n) => n.as_f64().filter(|x| !x.is_finite()).map(|_| path),
        // Non-finite floats serialize as null.
        serde_json::Value::Null if !path.is_empty() => Some(path),
        serde_json::Value::Array(items) => {
            items.iter().enumerate().find_map(|(i, x)| first_non_finite(x, format!("{path}[{i}]")))
        }
        serde_json::Value::Object(map) => map.iter().find_map(|(k, x)| {
            let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
            first_non_finite(x, p)
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HYPERBOLIC: &str = r#"{
        "name": "hyperbolic",
        "space": {"type": "hardy"},
        "phi": {"type": "lft", "coeffs": [[1,0],[0.5,0],[0.5,0],[1,0]]},
        "psi": {"type": "kernel", "w": [-0.5, 0]},
        "N": 256
    }"#;

    #[test]
    fn minimal_document() {
        let s = parse_scenario(HYPERBOLIC).unwrap();
        assert_eq!((s.n(), s.m(), s.seed()), (256, 64, 0));
        assert_eq!(s.op.psi, SymbolSpec::kernel(c64(-0.5, 0.0)));
        assert_eq!(s.checks.len(), CHECK_NAMES.len());
        let again = resolve(s.doc.clone()).unwrap();
        assert_eq!(again.doc, s.doc);
    }

    #[test]
    fn normal_auto_builds_the_normal_weight() {
        let text = HYPERBOLIC.replace(r#"{"type": "kernel", "w": [-0.5, 0]}"#, r#"{"type": "normal-auto"}"#);
        let s = parse_scenario(&text).unwrap();
        let (scale, w) = s.op.psi.as_kernel().unwrap();
        assert!((scale - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((w - c64(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn two_z_is_not_a_self_map() {
        let text = HYPERBOLIC.replace("[[1,0],[0.5,0],[0.5,0],[1,0]]", "[[2,0],[0,0],[0,0],[1,0]]");
        assert!(matches!(parse_scenario(&text), Err(CliError::NotSelfMap(_))));
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad_w = HYPERBOLIC.replace("[-0.5, 0]", "[-0.5]");
        match parse_scenario(&bad_w) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "psi.w"),
            other => panic!("{other:?}"),
        }
        let bad_type = HYPERBOLIC.replace(r#""type": "hardy""#, r#""type": "dirichlet""#);
        match parse_scenario(&bad_type) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "space.type"),
            other => panic!("{other:?}"),
        }
        let nested = HYPERBOLIC.replace(
            r#"{"type": "kernel", "w": [-0.5, 0]}"#,
            r#"{"type": "product", "factors": [{"type": "poly", "coeffs": [[1, 0]]}, {"type": "kernel", "w": "x"}]}"#,
        );
        match parse_scenario(&nested) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "psi.factors[1].w"),
            other => panic!("{other:?}"),
        }
        let extra = HYPERBOLIC.replace(r#""w": [-0.5, 0]"#, r#""w": [-0.5, 0], "radius": 2"#);
        match parse_scenario(&extra) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "psi.radius"),
            other => panic!("{other:?}"),
        }
        let bad_check = HYPERBOLIC.replace(r#""N": 256"#, r#""N": 256, "checks": ["kernel_adjoint", "nope"]"#);
        match parse_scenario(&bad_check) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "checks[1]"),
            other => panic!("{other:?}"),
        }
        let small_n = HYPERBOLIC.replace(r#""N": 256"#, r#""N": 100"#);
        match parse_scenario(&small_n) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "N"),
            other => panic!("{other:?}"),
        }
        let bad_tol = HYPERBOLIC.replace(r#""N": 256"#, r#""N": 256, "tol": {"bogus": 1e-3}"#);
        match parse_scenario(&bad_tol) {
            Err(CliError::Schema { path, .. }) => assert_eq!(path, "tol.bogus"),
            other => panic!("{other:?}"),
        }
    }
}
