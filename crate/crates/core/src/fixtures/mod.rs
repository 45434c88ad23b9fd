//! Example geometries as audited data files, with scripted checks that
//! re-derive their claims from the raw data.
//!
//! The JSON files under `fixtures/` are compiled in. Setting
//! `CYCLECONES_FIXTURE_DIR` makes [`load`] read `<dir>/<name>.json` instead,
//! when that file exists.
//!
//! Every numeric literal in a fixture must sit inside an object carrying a
//! `"source"` string (the object itself or an ancestor below the root); see
//! [`lint`].

mod checks;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value as Json;

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::projbundle::HNProfile;
use crate::rational::{serde_rational::RawRational, ClassVector, Rational};
use crate::ring::{AuditReport, RingPresentation, Value};
use crate::zariski::ConeGeometry;

pub use checks::{verify_claims, ClaimResult, ClaimStatus, VerificationReport};

pub const ENV_DIR: &str = "CYCLECONES_FIXTURE_DIR";

const EMBEDDED: [(&str, &str); 4] = [
    ("toric-3fold", include_str!("../../fixtures/toric-3fold.json")),
    ("p2-hilb2", include_str!("../../fixtures/p2-hilb2.json")),
    ("m07-s7", include_str!("../../fixtures/m07-s7.json")),
    ("projbundle-sample", include_str!("../../fixtures/projbundle-sample.json")),
];

/// Keys whose values are prose, identifiers or structure, never data.
const UNCHECKED_KEYS: [&str; 9] = [
    "source",
    "anchor",
    "description",
    "name",
    "id",
    "check",
    "expected",
    "dim",
    "dimension",
];

pub fn names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|(n, _)| *n).collect()
}

/// Raw text of a fixture, honouring the directory override.
pub fn source_text(name: &str) -> Result<String> {
    let embedded = EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    match std::env::var_os(ENV_DIR) {
        Some(dir) if PathBuf::from(&dir).join(format!("{name}.json")).is_file() => {
            Ok(std::fs::read_to_string(PathBuf::from(dir).join(format!("{name}.json")))?)
        }
        _ => Ok(embedded.1.to_string()),
    }
}

pub fn load(name: &str) -> Result<Fixture> {
    let text = source_text(name)?;
    Fixture::from_json_str(name, &text)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LintFinding {
    /// JSON pointer of the offending value or key.
    pub path: String,
    pub literal: String,
}

/// Numeric literals not covered by a `"source"` citation. A root-level
/// `"source"` does not count: citations must be local to the data.
pub fn lint(v: &Json) -> Vec<LintFinding> {
    fn has_source(map: &serde_json::Map<String, Json>) -> bool {
        map.get("source")
            .and_then(Json::as_str)
            .is_some_and(|s| !s.trim().is_empty())
    }
    fn go(v: &Json, path: &str, cited: bool, root: bool, out: &mut Vec<LintFinding>) {
        match v {
            Json::Object(map) => {
                let cited = cited || (!root && has_source(map));
                for (k, child) in map {
                    if UNCHECKED_KEYS.contains(&k.as_str()) {
                        continue;
                    }
                    let p = format!("{path}/{}", k.replace('~', "~0").replace('/', "~1"));
                    if !cited && has_numeric_literal(k) {
                        out.push(LintFinding {
                            path: p.clone(),
                            literal: k.clone(),
                        });
                    }
                    go(child, &p, cited, false, out);
                }
            }
            Json::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    go(child, &format!("{path}/{i}"), cited, false, out);
                }
            }
            Json::Number(n) if !cited => out.push(LintFinding {
                path: path.to_string(),
                literal: n.to_string(),
            }),
            Json::String(s) if !cited && has_numeric_literal(s) => out.push(LintFinding {
                path: path.to_string(),
                literal: s.clone(),
            }),
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(v, "", false, true, &mut out);
    out
}

/// A digit that is neither part of an identifier such as `D1` nor an
/// exponent such as the `2` in `D1^2`.
fn has_numeric_literal(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
        } else if c == '^' {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
        } else if c.is_ascii_digit() {
            return true;
        } else {
            i += 1;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedStatus {
    Pass,
    /// The claim is known not to reproduce from the printed data.
    Flagged,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub check: String,
    pub expected: ExpectedStatus,
    params: Json,
}

impl Claim {
    fn param(&self, key: &str) -> Result<&Json> {
        self.params
            .get(key)
            .ok_or_else(|| self.malformed(format!("missing `{key}`")))
    }

    fn str_param(&self, key: &str) -> Result<&str> {
        self.param(key)?
            .as_str()
            .ok_or_else(|| self.malformed(format!("`{key}` must be a string")))
    }

    fn strings(&self, key: &str) -> Result<Vec<String>> {
        json_strings(self.param(key)?).ok_or_else(|| self.malformed(format!("`{key}` must list strings")))
    }

    fn malformed(&self, reason: String) -> Error {
        Error::InvalidInput(format!("claim `{}`: {reason}", self.id))
    }
}

#[derive(Clone, Debug)]
pub struct Space {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    /// For spaces without a ring: the space whose coordinates this one is
    /// dual to, so that the pairing is the dot product.
    pub dual_to: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FixtureCone {
    pub space: String,
    pub labels: Vec<String>,
    /// Generators as listed, aligned with `labels`.
    pub generators: Vec<Vec<Rational>>,
    pub cone: PolyCone,
}

#[derive(Clone, Debug)]
enum FunctionalSpec {
    SumOf(String),
    PairingWith(String),
}

#[derive(Clone, Debug)]
struct GeometrySpec {
    mov: String,
    eff: String,
    functional: Option<FunctionalSpec>,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    name: String,
    description: String,
    ring: Option<RingPresentation>,
    audit: Option<AuditReport>,
    spaces: BTreeMap<String, Space>,
    cones: BTreeMap<String, FixtureCone>,
    vectors: BTreeMap<String, ClassVector>,
    geometries: BTreeMap<String, GeometrySpec>,
    profiles: BTreeMap<String, HNProfile>,
    claims: Vec<Claim>,
}

fn malformed(name: &str, reason: impl Into<String>) -> Error {
    Error::MalformedFixture {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn json_strings(v: &Json) -> Option<Vec<String>> {
    v.as_array()?
        .iter()
        .map(|x| x.as_str().map(str::to_string))
        .collect()
}

pub(crate) fn json_rational(v: &Json) -> Result<Rational> {
    let raw: RawRational = serde_json::from_value(v.clone())?;
    raw.into_rational()
}

pub(crate) fn json_vector(v: &Json) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidInput("expected an array of rationals".into()))?
        .iter()
        .map(json_rational)
        .collect()
}

fn object_entries<'a>(v: Option<&'a Json>, what: &str, name: &str) -> Result<Vec<(&'a String, &'a Json)>> {
    match v {
        None => Ok(Vec::new()),
        Some(Json::Object(m)) => Ok(m.iter().filter(|(k, _)| k.as_str() != "source").collect()),
        Some(_) => Err(malformed(name, format!("`{what}` must be an object"))),
    }
}

impl Fixture {
    pub fn from_json_str(name: &str, text: &str) -> Result<Self> {
        let v: Json = serde_json::from_str(text).map_err(|e| malformed(name, e.to_string()))?;
        Self::from_json(name, &v)
    }

    pub fn from_json(name: &str, v: &Json) -> Result<Self> {
        let findings = lint(v);
        if let Some(f) = findings.first() {
            return Err(malformed(
                name,
                format!(
                    "{} uncited numeric literal(s), first `{}` at {}",
                    findings.len(),
                    f.literal,
                    f.path
                ),
            ));
        }
        let declared = v.get("name").and_then(Json::as_str).unwrap_or(name);
        if declared != name {
            return Err(malformed(name, format!("file declares name `{declared}`")));
        }
        let description = v
            .get("description")
            .and_then(Json::as_str)
            .unwrap_or_default()
            .to_string();

        let ring = v
            .get("ring")
            .map(RingPresentation::from_json)
            .transpose()
            .map_err(|e| malformed(name, e.to_string()))?;
        let audit = ring.as_ref().map(RingPresentation::consistency_audit);

        let mut f = Fixture {
            name: name.to_string(),
            description,
            ring,
            audit,
            spaces: BTreeMap::new(),
            cones: BTreeMap::new(),
            vectors: BTreeMap::new(),
            geometries: BTreeMap::new(),
            profiles: BTreeMap::new(),
            claims: Vec::new(),
        };
        f.read_spaces(v)?;
        f.read_cones(v)?;
        f.read_vectors(v)?;
        f.read_geometries(v)?;
        f.read_profiles(v)?;
        f.read_claims(v)?;
        Ok(f)
    }

    fn read_spaces(&mut self, v: &Json) -> Result<()> {
        let name = self.name.clone();
        if let Some(ring) = &self.ring {
            for (label, _) in object_entries(v.get("ring").and_then(|r| r.get("bases")), "bases", &name)? {
                let labels = ring.basis_labels(label).expect("parsed basis").to_vec();
                self.spaces.insert(
                    label.clone(),
                    Space {
                        name: label.clone(),
                        dim: labels.len(),
                        labels,
                        dual_to: None,
                    },
                );
            }
        }
        for (label, spec) in object_entries(v.get("spaces"), "spaces", &name)? {
            let dim = spec
                .get("dim")
                .and_then(Json::as_u64)
                .ok_or_else(|| malformed(&name, format!("space `{label}` needs `dim`")))? as usize;
            let labels = match spec.get("labels") {
                Some(l) => json_strings(l).ok_or_else(|| malformed(&name, "space labels must be strings"))?,
                None => (1..=dim).map(|i| format!("e{i}")).collect(),
            };
            if labels.len() != dim {
                return Err(malformed(&name, format!("space `{label}` has {} labels for dim {dim}", labels.len())));
            }
            let dual_to = spec.get("dual_to").and_then(Json::as_str).map(str::to_string);
            self.spaces.insert(
                label.clone(),
                Space {
                    name: label.clone(),
                    dim,
                    labels,
                    dual_to,
                },
            );
        }
        for s in self.spaces.values() {
            if let Some(d) = &s.dual_to {
                match self.spaces.get(d) {
                    Some(t) if t.dim == s.dim => {}
                    _ => return Err(malformed(&name, format!("space `{}` is dual to unknown `{d}`", s.name))),
                }
            }
        }
        Ok(())
    }

    fn read_cones(&mut self, v: &Json) -> Result<()> {
        let name = self.name.clone();
        for (label, spec) in object_entries(v.get("cones"), "cones", &name)? {
            let space = spec
                .get("space")
                .and_then(Json::as_str)
                .ok_or_else(|| malformed(&name, format!("cone `{label}` needs `space`")))?;
            let dim = self.space(space)?.dim;
            let (labels, generators) = match (spec.get("generators"), spec.get("generated_by")) {
                (Some(g), None) => {
                    let rows: Vec<Vec<Rational>> = g
                        .as_array()
                        .ok_or_else(|| malformed(&name, format!("cone `{label}`: generators must be an array")))?
                        .iter()
                        .map(json_vector)
                        .collect::<Result<_>>()
                        .map_err(|e| malformed(&name, format!("cone `{label}`: {e}")))?;
                    let labels = match spec.get("labels") {
                        Some(l) => json_strings(l).ok_or_else(|| malformed(&name, "cone labels must be strings"))?,
                        None => (1..=rows.len()).map(|i| format!("{label}[{i}]")).collect(),
                    };
                    (labels, rows)
                }
                (None, Some(exprs)) => {
                    let exprs =
                        json_strings(exprs).ok_or_else(|| malformed(&name, "`generated_by` must list expressions"))?;
                    let rows = exprs
                        .iter()
                        .map(|e| self.coords_of(e, space))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| malformed(&name, format!("cone `{label}`: {e}")))?;
                    (exprs, rows)
                }
                _ => {
                    return Err(malformed(
                        &name,
                        format!("cone `{label}` needs exactly one of `generators`, `generated_by`"),
                    ))
                }
            };
            if labels.len() != generators.len() {
                return Err(malformed(&name, format!("cone `{label}` has mismatched labels")));
            }
            let cone = PolyCone::from_generators(self.basis_id(space), dim, generators.clone())
                .map_err(|e| malformed(&name, format!("cone `{label}`: {e}")))?
                .dd_convert();
            self.cones.insert(
                label.clone(),
                FixtureCone {
                    space: space.to_string(),
                    labels,
                    generators,
                    cone,
                },
            );
        }
        Ok(())
    }

    fn read_vectors(&mut self, v: &Json) -> Result<()> {
        let name = self.name.clone();
        for (label, spec) in object_entries(v.get("vectors"), "vectors", &name)? {
            let space = spec
                .get("space")
                .and_then(Json::as_str)
                .ok_or_else(|| malformed(&name, format!("vector `{label}` needs `space`")))?;
            let coords = spec
                .get("coords")
                .ok_or_else(|| malformed(&name, format!("vector `{label}` needs `coords`")))
                .and_then(|c| json_vector(c).map_err(|e| malformed(&name, e.to_string())))?;
            if coords.len() != self.space(space)?.dim {
                return Err(malformed(&name, format!("vector `{label}` has the wrong length")));
            }
            self.vectors
                .insert(label.clone(), ClassVector::new(self.basis_id(space), coords));
        }
        Ok(())
    }

    fn read_geometries(&mut self, v: &Json) -> Result<()> {
        let name = self.name.clone();
        for (label, spec) in object_entries(v.get("geometries"), "geometries", &name)? {
            let get = |k: &str| {
                spec.get(k)
                    .and_then(Json::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| malformed(&name, format!("geometry `{label}` needs `{k}`")))
            };
            let functional = match spec.get("degree_functional") {
                None => None,
                Some(f) => Some(if let Some(c) = f.get("sum_of").and_then(Json::as_str) {
                    FunctionalSpec::SumOf(c.to_string())
                } else if let Some(e) = f.get("pairing_with").and_then(Json::as_str) {
                    FunctionalSpec::PairingWith(e.to_string())
                } else {
                    return Err(malformed(&name, format!("geometry `{label}`: unknown degree functional")));
                }),
            };
            let g = GeometrySpec {
                mov: get("mov")?,
                eff: get("eff")?,
                functional,
            };
            self.geometries.insert(label.clone(), g);
            self.geometry(label).map_err(|e| malformed(&name, format!("geometry `{label}`: {e}")))?;
        }
        Ok(())
    }

    fn read_profiles(&mut self, v: &Json) -> Result<()> {
        let name = self.name.clone();
        for (label, text) in object_entries(v.get("profiles"), "profiles", &name)? {
            let text = text
                .as_str()
                .ok_or_else(|| malformed(&name, format!("profile `{label}` must be a string")))?;
            let h = HNProfile::parse(text).map_err(|e| malformed(&name, format!("profile `{label}`: {e}")))?;
            self.profiles.insert(label.clone(), h);
        }
        Ok(())
    }

    fn read_claims(&mut self, v: &Json) -> Result<()> {
        let name = self.name.clone();
        let Some(items) = v.get("claims") else {
            return Ok(());
        };
        let items = items
            .as_array()
            .ok_or_else(|| malformed(&name, "`claims` must be an array"))?;
        for item in items {
            let get = |k: &str| {
                item.get(k)
                    .and_then(Json::as_str)
                    .map(str::to_string)
                    .ok_or_else(|| malformed(&name, format!("claim without `{k}`")))
            };
            let id = get("id")?;
            let check = get("check")?;
            if !checks::is_known(&check) {
                return Err(malformed(&name, format!("claim `{id}` uses unknown check `{check}`")));
            }
            if self.claims.iter().any(|c| c.id == id) {
                return Err(malformed(&name, format!("duplicate claim `{id}`")));
            }
            let expected = match item.get("expected").and_then(Json::as_str) {
                None | Some("pass") => ExpectedStatus::Pass,
                Some("flagged") => ExpectedStatus::Flagged,
                Some(other) => return Err(malformed(&name, format!("claim `{id}`: unknown expected status `{other}`"))),
            };
            self.claims.push(Claim {
                id,
                anchor: get("anchor")?,
                check,
                expected,
                params: item.clone(),
            });
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn ring(&self) -> Option<&RingPresentation> {
        self.ring.as_ref()
    }

    /// The ring audit run at load time.
    pub fn audit(&self) -> Option<&AuditReport> {
        self.audit.as_ref()
    }

    pub fn claims(&self) -> &[Claim] {
        &self.claims
    }

    pub fn space_names(&self) -> Vec<&str> {
        self.spaces.keys().map(String::as_str).collect()
    }

    pub fn space(&self, name: &str) -> Result<&Space> {
        self.spaces
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("`{}` has no space `{name}`", self.name)))
    }

    pub fn basis_id(&self, space: &str) -> String {
        format!("{}:{space}", self.name)
    }

    pub fn cone_names(&self) -> Vec<&str> {
        self.cones.keys().map(String::as_str).collect()
    }

    pub fn cone(&self, name: &str) -> Result<&FixtureCone> {
        self.cones
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("`{}` has no cone `{name}`", self.name)))
    }

    pub fn vector(&self, name: &str) -> Result<&ClassVector> {
        self.vectors
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("`{}` has no vector `{name}`", self.name)))
    }

    pub fn profile(&self, name: &str) -> Result<&HNProfile> {
        self.profiles
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("`{}` has no profile `{name}`", self.name)))
    }

    pub fn profile_names(&self) -> Vec<&str> {
        self.profiles.keys().map(String::as_str).collect()
    }

    pub fn geometry_names(&self) -> Vec<&str> {
        self.geometries.keys().map(String::as_str).collect()
    }

    /// A generator of some cone in `space`, by its label.
    pub fn labelled(&self, space: &str, label: &str) -> Result<ClassVector> {
        for c in self.cones.values().filter(|c| c.space == space) {
            if let Some(i) = c.labels.iter().position(|l| l == label) {
                return Ok(ClassVector::new(self.basis_id(space), c.generators[i].clone()));
            }
        }
        if let Some(v) = self.vectors.get(label) {
            if v.basis == self.basis_id(space) {
                return Ok(v.clone());
            }
        }
        if self.ring.is_some() {
            return Ok(ClassVector::new(self.basis_id(space), self.coords_of(label, space)?));
        }
        Err(Error::InvalidInput(format!("no class `{label}` in space `{space}`")))
    }

    fn ring_or_err(&self) -> Result<&RingPresentation> {
        self.ring
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("`{}` has no intersection ring", self.name)))
    }

    /// Coordinates of a ring expression in a basis of the ring.
    pub fn coords_of(&self, expr: &str, space: &str) -> Result<Vec<Rational>> {
        let ring = self.ring_or_err()?;
        let v = ring.eval(expr)?;
        Ok(ring.coordinates_in(&v, space)?.coords)
    }

    /// The ring element with the given coordinates in a ring basis.
    pub fn value_of(&self, space: &str, coords: &[Rational]) -> Result<Value> {
        let ring = self.ring_or_err()?;
        let labels = &self.space(space)?.labels;
        let terms: Vec<String> = labels
            .iter()
            .zip(coords)
            .map(|(l, c)| format!("({})*({l})", crate::rational::format_rational(c)))
            .collect();
        ring.eval(&terms.join(" + "))
    }

    /// `pairing[i][j]` between the basis vectors of two spaces.
    pub fn pairing_matrix(&self, left: &str, right: &str) -> Result<Vec<Vec<Rational>>> {
        let (l, r) = (self.space(left)?, self.space(right)?);
        if let Some(ring) = &self.ring {
            let lv: Vec<Value> = l.labels.iter().map(|x| ring.eval(x)).collect::<Result<_>>()?;
            let rv: Vec<Value> = r.labels.iter().map(|x| ring.eval(x)).collect::<Result<_>>()?;
            return ring.pairing_matrix(&lv, &rv);
        }
        let dual = l.dual_to.as_deref() == Some(right) || r.dual_to.as_deref() == Some(left);
        if !dual {
            return Err(Error::InvalidInput(format!("no pairing between `{left}` and `{right}`")));
        }
        Ok((0..l.dim)
            .map(|i| {
                (0..r.dim)
                    .map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::from_integer(0.into()) })
                    .collect()
            })
            .collect())
    }

    /// The decomposition geometry registered under `name`, with its degree
    /// functional.
    pub fn geometry(&self, name: &str) -> Result<ConeGeometry> {
        let spec = self
            .geometries
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("`{}` has no geometry `{name}`", self.name)))?;
        let mov = self.cone(&spec.mov)?;
        let eff = self.cone(&spec.eff)?;
        if mov.space != eff.space {
            return Err(Error::BasisMismatch {
                left: mov.space.clone(),
                right: eff.space.clone(),
            });
        }
        let functional = match &spec.functional {
            None => None,
            Some(FunctionalSpec::SumOf(cone)) => {
                let c = self.cone(cone)?;
                let p = self.pairing_matrix(&c.space, &mov.space)?;
                let gens = c.cone.generators().expect("fixture cones keep their generators");
                let dim = mov.cone.dim();
                let mut f = vec![Rational::from_integer(0.into()); dim];
                for g in gens {
                    for (j, fj) in f.iter_mut().enumerate() {
                        for (i, gi) in g.iter().enumerate() {
                            *fj += gi * &p[i][j];
                        }
                    }
                }
                Some(ClassVector::new(self.basis_id(&mov.space), f))
            }
            Some(FunctionalSpec::PairingWith(expr)) => {
                let ring = self.ring_or_err()?;
                let h = ring.eval(expr)?;
                let f = self
                    .space(&mov.space)?
                    .labels
                    .iter()
                    .map(|l| ring.pair(&h, &ring.eval(l)?))
                    .collect::<Result<Vec<_>>>()?;
                Some(ClassVector::new(self.basis_id(&mov.space), f))
            }
        };
        ConeGeometry::new(mov.cone.clone(), eff.cone.clone(), functional)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_detection() {
        assert!(!has_numeric_literal("D1^2*D2^2"));
        assert!(!has_numeric_literal("Eff^1"));
        assert!(!has_numeric_literal("Eff_2-inner"));
        assert!(has_numeric_literal("3D1*D2^2"));
        assert!(has_numeric_literal("1/2"));
        assert!(has_numeric_literal("2:0,2:2"));
    }

    #[test]
    fn lint_requires_local_sources() {
        let bad: Json = serde_json::from_str(r#"{"source": "root", "cones": {"A": {"generators": [[1, 0]]}}}"#).unwrap();
        let found = lint(&bad);
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].path, "/cones/A/generators/0/0");
        let good: Json =
            serde_json::from_str(r#"{"cones": {"A": {"source": "here", "generators": [[1, 0]]}}, "dim": 2}"#).unwrap();
        assert!(lint(&good).is_empty());
    }

    #[test]
    fn all_embedded_fixtures_load() {
        for name in names() {
            let f = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(f.name(), name);
            assert!(!f.claims().is_empty());
        }
    }

    #[test]
    fn unknown_and_malformed() {
        assert!(matches!(load("nope"), Err(Error::UnknownFixture(_))));
        let e = Fixture::from_json_str("x", r#"{"name": "x", "claims": [{"id": "a", "anchor": "b", "check": "zzz"}]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("unknown check"), "{e}");
        assert!(Fixture::from_json_str("x", "{").is_err());
    }

    #[test]
    fn toric_data_as_printed() {
        let f = load("toric-3fold").unwrap();
        let eff = f.cone("Eff^1").unwrap();
        assert_eq!(eff.labels.len(), 8);
        let d4 = f.labelled("divisors", "D4").unwrap();
        assert_eq!(d4.coords, crate::rational::parse_vector("-2/3,1/3,-2/3,-1/3,1/3").unwrap());
        let g = f.geometry("curves").unwrap();
        assert_eq!(g.degree_functional().unwrap().coords, crate::rational::ints(&[2, 2, 2, -1, 5]));
    }

    #[test]
    fn ring_fixtures_carry_audits() {
        let p2 = load("p2-hilb2").unwrap();
        assert!(p2.audit().unwrap().is_clean(), "{:?}", p2.audit().unwrap().flags());
        let m07 = load("m07-s7").unwrap();
        let audit = m07.audit().unwrap();
        assert!(audit.has_flag("asymmetric_gram"));
        assert!(audit.has_flag("identity_mismatch"));
    }
}
