//! Check procedures behind fixture claims. Each one recomputes its claim from
//! the fixture data and reports whether the stated values reproduce, along
//! with the exact data it computed.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use serde::Serialize;
use serde_json::{json, Value as Json};

use super::{json_rational, json_vector, Claim, ExpectedStatus, Fixture};
use crate::certificate::{Certificate, SignCondition};
use crate::cone::PolyCone;
use crate::decomposition::Selection;
use crate::error::{Error, Result};
use crate::linalg::{coordinates, rank, solve};
use crate::lp;
use crate::negdef::PairingBasis;
use crate::projbundle::{BundleClass2D, HNProfile};
use crate::rational::{combine, dot, format_rational, int, primitive, sub, ClassVector, Rational};
use crate::ring::{AuditFlag, Value};
use crate::zariski::{preceq_maximum, DirectednessStatus};

const CHECKS: [&str; 24] = [
    "duality",
    "redundant-generator",
    "big-combination",
    "separated",
    "splittings",
    "not-directed",
    "intersection-lemmas",
    "coordinates",
    "pairings",
    "table",
    "facet",
    "decomposition",
    "identity",
    "cone-bounds",
    "simplicial-region",
    "cap-curve",
    "audit-clean",
    "hn-constants",
    "movable-not-nef",
    "bundle-decomposition",
    "self-intersection",
    "bck-contrast",
    "closed-form-vs-lp",
    "bundle-intersection-lemmas",
];

pub(super) fn is_known(check: &str) -> bool {
    CHECKS.contains(&check)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Pass,
    Fail,
    /// Does not reproduce, and is recorded as such in the fixture.
    Flagged,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub anchor: String,
    pub check: String,
    pub expected: ExpectedStatus,
    pub status: ClaimStatus,
    pub as_expected: bool,
    pub message: String,
    pub witness: Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub fixture: String,
    pub results: Vec<ClaimResult>,
    pub audit_flags: Vec<AuditFlag>,
    pub all_as_expected: bool,
}

impl VerificationReport {
    pub fn result(&self, id: &str) -> Option<&ClaimResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn count(&self, status: ClaimStatus) -> usize {
        self.results.iter().filter(|r| r.status == status).count()
    }
}

struct Outcome {
    reproduced: bool,
    message: String,
    witness: Json,
}

impl Outcome {
    fn new(reproduced: bool, message: impl Into<String>, witness: Json) -> Self {
        Self {
            reproduced,
            message: message.into(),
            witness,
        }
    }
}

/// Runs every claim of the fixture. Never fails: errors become `Fail`
/// entries.
pub fn verify_claims(f: &Fixture) -> VerificationReport {
    let mut results = Vec::new();
    for claim in f.claims() {
        let (status, message, witness) = match run(f, claim) {
            Ok(o) => {
                let status = match (o.reproduced, claim.expected) {
                    (true, _) => ClaimStatus::Pass,
                    (false, ExpectedStatus::Flagged) => ClaimStatus::Flagged,
                    (false, ExpectedStatus::Pass) => ClaimStatus::Fail,
                };
                (status, o.message, o.witness)
            }
            Err(e) => (ClaimStatus::Fail, format!("check failed to run: {e}"), Json::Null),
        };
        let as_expected = matches!(
            (status, claim.expected),
            (ClaimStatus::Pass, ExpectedStatus::Pass) | (ClaimStatus::Flagged, ExpectedStatus::Flagged)
        );
        results.push(ClaimResult {
            id: claim.id.clone(),
            anchor: claim.anchor.clone(),
            check: claim.check.clone(),
            expected: claim.expected,
            status,
            as_expected,
            message,
            witness,
        });
    }
    let all_as_expected = results.iter().all(|r| r.as_expected);
    VerificationReport {
        fixture: f.name().to_string(),
        results,
        audit_flags: f.audit().map(|a| a.flags()).unwrap_or_default(),
        all_as_expected,
    }
}

fn run(f: &Fixture, c: &Claim) -> Result<Outcome> {
    match c.check.as_str() {
        "duality" => duality(f, c),
        "redundant-generator" => redundant_generator(f, c),
        "big-combination" => big_combination(f, c),
        "separated" => separated(f, c),
        "splittings" => splittings(f, c),
        "not-directed" => not_directed(f, c),
        "intersection-lemmas" => intersection_lemmas(f, c),
        "coordinates" => coordinates_check(f, c),
        "pairings" => pairings(f, c),
        "table" => table(f, c),
        "facet" => facet(f, c),
        "decomposition" => decomposition(f, c),
        "identity" => identity(f, c),
        "cone-bounds" => cone_bounds(f, c),
        "simplicial-region" => simplicial_region(f, c),
        "cap-curve" => cap_curve(f, c),
        "audit-clean" => audit_clean(f, c),
        "hn-constants" => hn_constants(f, c),
        "movable-not-nef" => movable_not_nef(f, c),
        "bundle-decomposition" => bundle_decomposition(f, c),
        "self-intersection" => self_intersection(f, c),
        "bck-contrast" => bck_contrast(f, c),
        "closed-form-vs-lp" => closed_form_vs_lp(f, c),
        "bundle-intersection-lemmas" => bundle_intersection_lemmas(f, c),
        other => Err(Error::InvalidInput(format!("unknown check `{other}`"))),
    }
}

fn q(x: &Rational) -> Json {
    Json::String(format_rational(x))
}

fn qv(v: &[Rational]) -> Json {
    Json::Array(v.iter().map(q).collect())
}

fn qm(m: &[Vec<Rational>]) -> Json {
    Json::Array(m.iter().map(|r| qv(r)).collect())
}

fn to_json<T: Serialize>(x: &T) -> Json {
    serde_json::to_value(x).expect("report types serialize")
}

fn ring(f: &Fixture) -> Result<&crate::ring::RingPresentation> {
    f.ring()
        .ok_or_else(|| Error::InvalidInput(format!("`{}` has no intersection ring", f.name())))
}


fn duality(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let pairs = c.param("pairs")?.as_array().cloned().unwrap_or_default();
    let mut all = true;
    let mut witness = Vec::new();
    for p in &pairs {
        let names = super::json_strings(p).filter(|n| n.len() == 2).ok_or_else(|| c.malformed("bad pair".into()))?;
        let (a, b) = (f.cone(&names[0])?, f.cone(&names[1])?);
        let pm = f.pairing_matrix(&a.space, &b.space)?;
        let rows: Vec<Vec<Rational>> = a
            .cone
            .canonical_generators()
            .iter()
            .map(|g| (0..b.cone.dim()).map(|j| g.iter().enumerate().map(|(i, gi)| gi * &pm[i][j]).sum()).collect())
            .collect();
        let dual = PolyCone::from_inequalities(b.cone.basis(), b.cone.dim(), rows)?;
        let equal = dual.same_cone(&b.cone);
        all &= equal;
        witness.push(json!({
            "dual_of": names[0],
            "expected": names[1],
            "computed_rays": qm(&dual.canonical_generators()),
            "expected_rays": qm(&b.cone.canonical_generators()),
            "equal": equal,
        }));
    }
    let msg = if all {
        "every dual cone matches its stated generators"
    } else {
        "a dual cone differs from its stated generators"
    };
    Ok(Outcome::new(all, msg, Json::Array(witness)))
}

fn redundant_generator(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let cone = f.cone(c.str_param("cone")?)?;
    let label = c.str_param("generator")?;
    let idx = cone
        .labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| c.malformed(format!("no generator `{label}`")))?;
    let gens = cone.generators.clone();
    let others: Vec<Vec<Rational>> = gens.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, g)| g.clone()).collect();
    let labels: Vec<&String> = cone.labels.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, l)| l).collect();
    Ok(match lp::nonnegative_combination(&others, &gens[idx]) {
        Some(coeffs) => {
            let cert = Certificate::NonnegativeCombination {
                target: gens[idx].clone(),
                generators: others,
                coefficients: coeffs.clone(),
            };
            let combo: BTreeMap<&String, Json> = labels.into_iter().zip(coeffs.iter().map(q)).collect();
            Outcome::new(
                cert.verify(),
                format!("{label} is a nonnegative combination of the other generators"),
                json!({ "coefficients": combo, "certificate": to_json(&cert) }),
            )
        }
        None => Outcome::new(false, format!("{label} is extremal"), Json::Null),
    })
}

fn big_combination(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let v = f.vector(c.str_param("vector")?)?;
    let cone = f.cone(c.str_param("cone")?)?;
    let coeffs = json_vector(c.param("coefficients")?)?;
    let gens = cone.generators.clone();
    let combo = combine(&coeffs, &gens, v.dim());
    let matches = combo == v.coords && coeffs.iter().all(Signed::is_positive) && coeffs.len() == gens.len();
    let values: Vec<Rational> = cone.cone.canonical_inequalities().iter().map(|l| dot(l, &v.coords)).collect();
    let interior = cone.cone.facet_frame().lineality.is_empty() && values.iter().all(Signed::is_positive);
    Ok(Outcome::new(
        matches && interior,
        if interior {
            "strictly positive on every facet"
        } else {
            "not in the interior"
        },
        json!({ "combination": qv(&combo), "facet_values": qv(&values), "matches": matches }),
    ))
}

fn separated(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let v = f.vector(c.str_param("vector")?)?;
    let cone = f.cone(c.str_param("cone")?)?;
    let functional = json_vector(c.param("functional")?)?;
    let cert = Certificate::Separation {
        point: v.coords.clone(),
        functional: functional.clone(),
        generators: cone.generators.clone(),
    };
    let ok = cert.verify();
    Ok(Outcome::new(
        ok,
        format!("functional value on the class: {}", format_rational(&dot(&functional, &v.coords))),
        to_json(&cert),
    ))
}

fn splittings(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let v = f.vector(c.str_param("vector")?)?;
    let space = v.basis.rsplit(':').next().unwrap_or_default().to_string();
    let items = c.param("splittings")?.as_array().cloned().unwrap_or_default();
    let mut all = true;
    let mut witness = Vec::new();
    for item in &items {
        let pair = super::json_strings(item).filter(|p| p.len() == 2).ok_or_else(|| c.malformed("bad splitting".into()))?;
        let m = f.labelled(&space, &pair[0])?;
        let n = f.labelled(&space, &pair[1])?;
        let diff = sub(&v.coords, &m.coords);
        let ok = diff == n.coords;
        all &= ok;
        witness.push(json!({ "movable": pair[0], "difference": qv(&diff), "expected": pair[1], "holds": ok }));
    }
    Ok(Outcome::new(all, "class minus movable part", Json::Array(witness)))
}

fn not_directed(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let v = f.vector(c.str_param("vector")?)?;
    let g = f.geometry(c.str_param("geometry")?)?;
    let space = v.basis.rsplit(':').next().unwrap_or_default().to_string();
    let pair = c.strings("pair")?;
    let s = g.decomposition_polytope(v)?;
    let report = preceq_maximum(&g, &s)?;
    let classes: Vec<ClassVector> = pair.iter().map(|l| f.labelled(&space, l)).collect::<Result<_>>()?;
    let in_s = classes.iter().all(|m| s.contains(&m.coords));
    let cert = g.no_common_dominator(&s, &classes);
    let cert_ok = cert.as_ref().is_some_and(Certificate::verify);
    let no_max = report.status == DirectednessStatus::NoMaximum;
    Ok(Outcome::new(
        no_max && report.verify() && in_s && cert_ok,
        format!(
            "{}; {} both below the class: {in_s}; Farkas certificate for the pair: {cert_ok}",
            if no_max { "no domination maximum" } else { "a domination maximum exists" },
            pair.join(" and ")
        ),
        json!({
            "vertices": to_json(&s.vertices().unwrap_or_default()),
            "report": to_json(&report),
            "pair_certificate": cert.as_ref().map(to_json),
        }),
    ))
}

fn product_in(f: &Fixture, div_space: &str, div: &[Rational], space: &str, alpha: &[Rational]) -> Result<Value> {
    let r = ring(f)?;
    r.multiply(&f.value_of(div_space, div)?, &f.value_of(space, alpha)?)
}

fn intersection_lemmas(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let mov = f.cone(c.str_param("mov")?)?;
    let eff1 = f.cone(c.str_param("eff_divisors")?)?;
    let nef1 = f.cone(c.str_param("nef_divisors")?)?;
    let targets = match (c.params.get("eff_target"), c.params.get("mov_target")) {
        (Some(e), Some(m)) => Some((
            f.cone(e.as_str().unwrap_or_default())?,
            f.cone(m.as_str().unwrap_or_default())?,
        )),
        (None, None) => None,
        _ => return Err(c.malformed("give both `eff_target` and `mov_target` or neither".into())),
    };
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for alpha in mov.generators.clone() {
        for (kind, divisors) in [("pseudo-effective", eff1), ("nef", nef1)] {
            for d in divisors.generators.clone() {
                checked += 1;
                let ok = match &targets {
                    None => {
                        let p = f.pairing_matrix(&divisors.space, &mov.space)?;
                        let deg: Rational = (0..d.len())
                            .flat_map(|i| (0..alpha.len()).map(move |j| (i, j)))
                            .map(|(i, j)| &d[i] * &p[i][j] * &alpha[j])
                            .sum();
                        !deg.is_negative()
                    }
                    Some((eff_t, mov_t)) => {
                        let target = if kind == "nef" { mov_t } else { eff_t };
                        let prod = product_in(f, &divisors.space, &d, &mov.space, &alpha)?;
                        let coords = ring(f)?.coordinates_in(&prod, &target.space)?;
                        target
                            .cone
                            .contains(&ClassVector::new(f.basis_id(&target.space), coords.coords))?
                            .is_inside()
                    }
                };
                if !ok {
                    violations.push(json!({ "divisor": qv(&d), "kind": kind, "movable": qv(&alpha) }));
                }
            }
        }
    }
    Ok(Outcome::new(
        violations.is_empty(),
        format!("{checked} products of divisor and movable generators checked"),
        json!({ "checked": checked, "violations": violations }),
    ))
}

fn coordinates_check(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let items = c.param("items")?.as_array().cloned().unwrap_or_default();
    let mut all = true;
    let mut witness = Vec::new();
    for item in &items {
        let expr = item.get("expr").and_then(Json::as_str).ok_or_else(|| c.malformed("item without `expr`".into()))?;
        let basis = item.get("basis").and_then(Json::as_str).ok_or_else(|| c.malformed("item without `basis`".into()))?;
        let expected = json_vector(item.get("coords").ok_or_else(|| c.malformed("item without `coords`".into()))?)?;
        let got = f.coords_of(expr, basis)?;
        let ok = got == expected;
        all &= ok;
        witness.push(json!({ "expr": expr, "basis": basis, "coords": qv(&got), "expected": qv(&expected), "holds": ok }));
    }
    Ok(Outcome::new(all, "coordinates in the named bases", Json::Array(witness)))
}

fn pairings(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let r = ring(f)?;
    let items = c.param("items")?.as_array().cloned().unwrap_or_default();
    let mut all = true;
    let mut witness = Vec::new();
    for item in &items {
        let get = |k: &str| item.get(k).and_then(Json::as_str).ok_or_else(|| c.malformed(format!("item without `{k}`")));
        let (lhs, rhs) = (get("lhs")?, get("rhs")?);
        let value = r.pair(&r.eval(lhs)?, &r.eval(rhs)?)?;
        let ok = match (item.get("value"), item.get("sign").and_then(Json::as_str)) {
            (Some(v), _) => value == json_rational(v)?,
            (None, Some("positive")) => SignCondition::Positive.holds(&value),
            (None, Some("nonnegative")) => SignCondition::Nonnegative.holds(&value),
            _ => return Err(c.malformed("item needs `value` or `sign`".into())),
        };
        all &= ok;
        witness.push(json!({ "lhs": lhs, "rhs": rhs, "value": q(&value), "holds": ok }));
    }
    Ok(Outcome::new(all, "exact pairings", Json::Array(witness)))
}

fn table(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let r = ring(f)?;
    let classes = c.strings("classes")?;
    let expected: Vec<Vec<Rational>> = c
        .param("matrix")?
        .as_array()
        .ok_or_else(|| c.malformed("`matrix` must be an array".into()))?
        .iter()
        .map(json_vector)
        .collect::<Result<_>>()?;
    let values: Vec<Value> = classes.iter().map(|l| r.eval(l)).collect::<Result<_>>()?;
    let m = r.pairing_matrix(&values, &values)?;
    let mismatches: Vec<Json> = (0..m.len())
        .flat_map(|i| (0..m.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| expected.get(i).and_then(|row| row.get(j)) != Some(&m[i][j]))
        .map(|(i, j)| json!([classes[i], classes[j], q(&m[i][j])]))
        .collect();
    Ok(Outcome::new(
        mismatches.is_empty() && expected.len() == m.len(),
        format!("{}x{} table, {} mismatching entries", m.len(), m.len(), mismatches.len()),
        json!({ "classes": classes, "matrix": qm(&m), "mismatches": mismatches }),
    ))
}

fn facet(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let cone = f.cone(c.str_param("cone")?)?;
    let ineq = primitive(&json_vector(c.param("inequality")?)?);
    let facets = cone.cone.facet_frame().rays;
    let ok = facets.contains(&ineq);
    Ok(Outcome::new(
        ok,
        if ok { "inequality is a facet" } else { "inequality is not a facet" },
        json!({ "facets": qm(&facets), "inequality": qv(&ineq) }),
    ))
}

fn class_param(f: &Fixture, c: &Claim, space: &str) -> Result<ClassVector> {
    match c.param("class")? {
        Json::String(label) => f.labelled(space, label),
        v => Ok(ClassVector::new(f.basis_id(space), json_vector(v)?)),
    }
}

fn decomposition(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let name = c.str_param("geometry")?;
    let g = f.geometry(name)?;
    let space = g.basis().rsplit(':').next().unwrap_or_default().to_string();
    let alpha = class_param(f, c, &space)?;
    let p = json_vector(c.param("positive")?)?;
    let n = json_vector(c.param("negative")?)?;
    let d = g.decompose(&alpha, None)?;
    let certified = d.metadata.selection == Selection::CertifiedMaximum;
    let ok = d.positive.coords == p && d.negative.coords == n && certified && d.verify();
    Ok(Outcome::new(
        ok,
        format!(
            "P = {}, N = {}{}",
            crate::rational::format_vector(&d.positive.coords),
            crate::rational::format_vector(&d.negative.coords),
            if certified { ", certified maximum" } else { ", no certified maximum" }
        ),
        to_json(&d),
    ))
}

fn identity(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let id = c.str_param("identity")?;
    let audit = f
        .audit()
        .and_then(|a| a.identities.iter().find(|i| i.id == id))
        .ok_or_else(|| c.malformed(format!("no ring identity `{id}`")))?;
    let mut ok = audit.holds;
    let mut inside = Json::Null;
    if let Some(cone) = c.params.get("cone").and_then(Json::as_str) {
        let cone = f.cone(cone)?;
        let coords = f.coords_of(&audit.lhs, &cone.space)?;
        let m = cone.cone.contains(&ClassVector::new(f.basis_id(&cone.space), coords))?;
        ok &= m.is_inside();
        inside = to_json(m.certificate());
    }
    let message = match (&audit.error, audit.holds) {
        (Some(e), _) => e.clone(),
        (None, true) => format!("{} = {}", audit.lhs, audit.rhs),
        (None, false) => format!("coordinates {:?} differ", audit.mismatched_coordinates),
    };
    Ok(Outcome::new(ok, message, json!({ "audit": to_json(audit), "membership": inside })))
}

fn nef_functionals(f: &Fixture, forms: &[String], space: &str) -> Result<Vec<Vec<Rational>>> {
    let r = ring(f)?;
    let labels = &f.space(space)?.labels;
    forms
        .iter()
        .map(|form| {
            let v = r.eval(form)?;
            labels.iter().map(|l| r.pair(&v, &r.eval(l)?)).collect()
        })
        .collect()
}

fn cone_bounds(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let inner = f.cone(c.str_param("inner")?)?;
    let outer = f.cone(c.str_param("outer")?)?;
    let space = inner.space.clone();
    let forms = c.strings("nef_forms")?;
    let functionals = nef_functionals(f, &forms, &space)?;
    let nonneg = inner.generators.clone()
        .iter()
        .all(|g| functionals.iter().all(|l| !dot(l, g).is_negative()));

    let bound = c.param("bound")?;
    let classes = super::json_strings(bound.get("classes").unwrap_or(&Json::Null))
        .ok_or_else(|| c.malformed("bound needs `classes`".into()))?;
    let weights = json_vector(bound.get("coefficients").unwrap_or(&Json::Null))?;
    let rows: Vec<Vec<Rational>> = classes.iter().map(|e| f.coords_of(e, &space)).collect::<Result<_>>()?;
    let dim = inner.cone.dim();
    if rank(&rows, dim) != dim {
        return Err(c.malformed("bound classes are not a basis".into()));
    }
    let ell = solve(&rows, &weights, dim).ok_or_else(|| c.malformed("inconsistent bound".into()))?;

    let mut ineqs = functionals.clone();
    ineqs.push(ell.clone());
    let cut = PolyCone::from_inequalities(outer.cone.basis(), dim, ineqs)?;
    let equal = cut.same_cone(&outer.cone);
    let nested = outer.cone.contains_cone(&inner.cone)?;
    Ok(Outcome::new(
        nonneg && equal && nested,
        format!("nef forms nonnegative on inner: {nonneg}; cut cone equals outer: {equal}; inner inside outer: {nested}"),
        json!({
            "nef_functionals": qm(&functionals),
            "bound_functional": qv(&ell),
            "cut_rays": qm(&cut.canonical_generators()),
            "outer_rays": qm(&outer.cone.canonical_generators()),
        }),
    ))
}

fn simplicial_region(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let cone = f.cone(c.str_param("cone")?)?;
    let gens = c.strings("generators")?;
    let rows: Vec<Vec<Rational>> = gens.iter().map(|e| f.coords_of(e, &cone.space)).collect::<Result<_>>()?;
    let independent = rank(&rows, cone.cone.dim()) == rows.len();
    let inside = rows
        .iter()
        .map(|r| cone.cone.contains(&ClassVector::new(f.basis_id(&cone.space), r.clone())))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|m| m.is_inside());
    Ok(Outcome::new(
        independent && inside,
        format!("independent: {independent}; inside {}: {inside}", c.str_param("cone")?),
        json!({ "generators": qm(&rows) }),
    ))
}

/// `divisor * nef^2` as a curve, pairing against each divisor basis vector
/// with the cap relations applied on either side.
fn cap_curve(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let r = ring(f)?;
    let d = c.str_param("divisor")?;
    let h = c.str_param("nef_divisor")?;
    let nef_curves = f.cone(c.str_param("nef_curves")?)?;
    let curve_space = nef_curves.space.clone();
    let div_space = "divisors";
    let square = r.eval(&format!("({h})^2"))?;
    let square_cap = r.cap_expand(&square)?;
    let mut right = Vec::new();
    let mut left = Vec::new();
    for dj in &f.space(div_space)?.labels {
        let prod = r.eval(&format!("({d})*({dj})"))?;
        right.push(r.pair(&prod, &square_cap)?);
        left.push(r.pair(&square, &r.cap_expand(&prod)?)?);
    }
    let pm = f.pairing_matrix(&curve_space, div_space)?;
    let to_curve = |vals: &[Rational]| {
        coordinates(&pm, vals).ok_or_else(|| Error::Ring("curve basis does not pair perfectly with divisors".into()))
    };
    let paths = [("cap_right", to_curve(&right)?), ("cap_left", to_curve(&left)?)];
    let mut witness = serde_json::Map::new();
    for (name, coords) in &paths {
        witness.insert((*name).into(), qv(coords));
    }
    let (ok, message) = match c.params.get("coords") {
        Some(v) => {
            let expected = json_vector(v)?;
            witness.insert("expected".into(), qv(&expected));
            let ok = paths.iter().all(|(_, x)| *x == expected);
            (ok, format!("stated {}; computed {} and {}", fmt(&expected), fmt(&paths[0].1), fmt(&paths[1].1)))
        }
        None => {
            let mut outside = true;
            for (_, x) in &paths {
                let m = nef_curves.cone.contains(&ClassVector::new(f.basis_id(&curve_space), x.clone()))?;
                outside &= !m.is_inside();
            }
            (outside, format!("class is{} nef under both cap paths", if outside { " not" } else { "" }))
        }
    };
    Ok(Outcome::new(ok, message, Json::Object(witness)))
}

fn fmt(v: &[Rational]) -> String {
    crate::rational::format_vector(v)
}

fn audit_clean(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let audit = f.audit().ok_or_else(|| c.malformed("fixture has no ring audit".into()))?;
    let codes = c.strings("codes")?;
    let flags: Vec<AuditFlag> = audit.flags().into_iter().filter(|x| codes.iter().any(|k| k == x.code)).collect();
    let message = match flags.first() {
        None => "no findings".to_string(),
        Some(first) => format!("{} finding(s), first: {}", flags.len(), first.message),
    };
    Ok(Outcome::new(
        flags.is_empty(),
        message,
        json!({ "flags": to_json(&flags), "gram": to_json(&audit.gram) }),
    ))
}

fn profile<'a>(f: &'a Fixture, c: &Claim) -> Result<&'a HNProfile> {
    f.profile(c.str_param("profile")?)
}

fn k_param(c: &Claim) -> Result<usize> {
    c.param("k")?
        .as_u64()
        .map(|k| k as usize)
        .ok_or_else(|| c.malformed("`k` must be a nonnegative integer".into()))
}

fn bundle_class(c: &Claim, k: usize) -> Result<BundleClass2D> {
    let v = json_vector(c.param("class")?)?;
    if v.len() != 2 {
        return Err(c.malformed("bundle classes have two coordinates".into()));
    }
    Ok(BundleClass2D::new(k, v[0].clone(), v[1].clone()))
}

fn indexed(c: &Claim, key: &str) -> Result<Vec<(usize, Rational)>> {
    let Some(map) = c.params.get(key) else {
        return Ok(Vec::new());
    };
    let map = map.as_object().ok_or_else(|| c.malformed(format!("`{key}` must map k to values")))?;
    map.iter()
        .map(|(k, v)| {
            let k: usize = k.parse().map_err(|_| c.malformed(format!("bad index `{k}`")))?;
            Ok((k, json_rational(v)?))
        })
        .collect()
}

fn hn_constants(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let h = profile(f, c)?;
    let eps_expected = json_vector(c.param("epsilon")?)?;
    let eps: Vec<Rational> = (0..=h.rank()).map(|k| h.epsilon(k)).collect::<Result<_>>()?;
    let mut ok = eps == eps_expected;
    let mut nu = serde_json::Map::new();
    for (k, v) in indexed(c, "nu")? {
        let got = h.nu(k)?;
        ok &= got == v;
        nu.insert(k.to_string(), q(&got));
    }
    let mut sigma = serde_json::Map::new();
    for (k, v) in indexed(c, "sigma")? {
        let got = h.sigma(k)?;
        ok &= got == v;
        sigma.insert(k.to_string(), q(&got));
    }
    Ok(Outcome::new(
        ok,
        format!("profile {h}"),
        json!({ "epsilon": qv(&eps), "nu": nu, "sigma": sigma }),
    ))
}

fn movable_not_nef(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let h = profile(f, c)?;
    let ks: Vec<usize> = c
        .param("ks")?
        .as_array()
        .ok_or_else(|| c.malformed("`ks` must be an array".into()))?
        .iter()
        .map(|k| k.as_u64().map(|k| k as usize).ok_or_else(|| c.malformed("bad k".into())))
        .collect::<Result<_>>()?;
    let mut ok = true;
    let mut witness = Vec::new();
    for k in ks {
        let a = bundle_class(c, k)?;
        let cones = h.cones(k)?;
        let class = a.to_class(h);
        let mov = cones.mov.contains(&class)?;
        let nef = cones.nef.contains(&class)?;
        ok &= mov.is_inside() && !nef.is_inside();
        witness.push(json!({
            "k": k,
            "movable": to_json(mov.certificate()),
            "not_nef": to_json(nef.certificate()),
        }));
    }
    Ok(Outcome::new(ok, "movable and outside the nef cone", Json::Array(witness)))
}

fn bundle_decomposition(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let h = profile(f, c)?;
    let k = k_param(c)?;
    let a = bundle_class(c, k)?;
    let p = json_vector(c.param("positive")?)?;
    let n = json_vector(c.param("negative")?)?;
    let closed = h.zariski_decompose(&a)?;
    let lp = h.geometry(k)?.decompose(&a.to_class(h), None)?;
    let agree = closed.positive == lp.positive && closed.negative == lp.negative;
    let ok = closed.positive.coords == p && closed.negative.coords == n && agree && closed.verify() && lp.verify();
    Ok(Outcome::new(
        ok,
        format!("P = {}, N = {}; cone program agrees: {agree}", fmt(&closed.positive.coords), fmt(&closed.negative.coords)),
        json!({ "closed_form": to_json(&closed), "linear_program": to_json(&lp) }),
    ))
}

fn self_intersection(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let h = profile(f, c)?;
    let k = k_param(c)?;
    let a = bundle_class(c, k)?;
    let expected = json_rational(c.param("value")?)?;
    let got = h.pair_classes(&a, &a)?;
    Ok(Outcome::new(got == expected, format!("self-intersection {}", format_rational(&got)), q(&got)))
}

fn bck_contrast(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let h = profile(f, c)?;
    let k = k_param(c)?;
    let z = bundle_class(c, k)?;
    let ours = h.zariski_decompose(&z)?;
    let gram = vec![vec![h.pair_classes(&z, &z)?]];
    let bck = PairingBasis::new(vec!["Z".into()], gram)?.decompose(&[Rational::one()])?;
    let movable = ours.negative.is_zero();
    let own_negative = bck.negative.coords == vec![Rational::one()];
    Ok(Outcome::new(
        movable && own_negative,
        format!("movable: {movable}; its own negative part against its Gram matrix: {own_negative}"),
        json!({ "zariski": to_json(&ours), "bck": to_json(&bck) }),
    ))
}

fn closed_form_vs_lp(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let names = c.strings("profiles")?;
    let range = c.param("range")?.as_u64().ok_or_else(|| c.malformed("`range` must be an integer".into()))? as i64;
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    for name in &names {
        let h = f.profile(name)?;
        for k in 1..h.rank() {
            let eps = h.epsilon(k)?;
            let g = h.geometry(k)?;
            for a in 0..=range {
                for b in 0..=range {
                    let alpha = BundleClass2D::new(k, int(a), int(a) * &eps + int(b));
                    let closed = h.zariski_decompose(&alpha)?;
                    let class = alpha.to_class(h);
                    let lp = g.decompose(&class, None)?;
                    let s = g.decomposition_polytope(&class)?;
                    let maximum = preceq_maximum(&g, &s)?.maximum().cloned();
                    checked += 1;
                    if closed.positive != lp.positive || maximum.as_ref() != Some(&closed.positive) {
                        mismatches.push(json!({ "profile": name, "k": k, "class": [a, b] }));
                    }
                }
            }
        }
    }
    Ok(Outcome::new(
        mismatches.is_empty(),
        format!("{checked} classes, {} mismatches", mismatches.len()),
        json!({ "checked": checked, "mismatches": mismatches }),
    ))
}

fn bundle_intersection_lemmas(f: &Fixture, c: &Claim) -> Result<Outcome> {
    let names = c.strings("profiles")?;
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for name in &names {
        let h = f.profile(name)?;
        let n = h.rank();
        if n < 3 {
            continue;
        }
        let divisors = h.cones(n - 1)?;
        let eff1 = divisors.eff.extremal_rays()?;
        let nef1 = divisors.nef.extremal_rays()?;
        for k in 2..n {
            let below = h.cones(k - 1)?;
            for alpha in h.cones(k)?.mov.extremal_rays()? {
                let alpha = BundleClass2D::from_class(k, &alpha)?;
                for (kind, gens, target) in [("pseudo-effective", &eff1, &below.eff), ("nef", &nef1, &below.mov)] {
                    for d in gens {
                        checked += 1;
                        let prod = h.divisor_product(&d.coords[0], &d.coords[1], &alpha)?;
                        if !target.contains(&prod.to_class(h))?.is_inside() {
                            violations.push(json!({ "profile": name, "k": k, "kind": kind }));
                        }
                    }
                }
            }
        }
    }
    Ok(Outcome::new(
        violations.is_empty(),
        format!("{checked} products checked"),
        json!({ "checked": checked, "violations": violations }),
    ))
}
