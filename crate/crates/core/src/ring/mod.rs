//! Graded intersection rings given by generators, rewrite relations and
//! pairings.
//!
//! A presentation lists divisor generators, rewrite rules `monomial ->
//! polynomial`, the values of top-degree normal monomials, named classes
//! (expressions over the generators), named bases, and dual bases: symbols
//! declared to be the basis of `N_k` dual to a list of codimension-`k` forms.
//!
//! Two pairing paths exist. The top-degree path multiplies and reads off top
//! values. The dual-basis path takes coordinates of a form against the
//! declared `dual_to` list and dots them with a dual element. Optional cap
//! relations express forms in a dual basis; they are used only when asked for
//! explicitly ([`RingPresentation::cap_expand`], identities in the audit),
//! because printed cap data is the part most likely to be inconsistent.

pub mod expr;
pub mod monomial;

use std::cell::Cell;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::linalg::{coordinates, rank};
use crate::rational::{combine, dot, format_rational, serde_matrix, serde_vector, ClassVector, Rational};

pub use expr::Expr;
pub use monomial::{Monomial, Poly};

const REWRITE_STEP_LIMIT: usize = 1_000_000;

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Rational),
    /// Element of `N^codim`, in normal form.
    Form { codim: usize, poly: Poly },
    /// Element of the span of a dual basis.
    Dual { basis: String, coords: Vec<Rational> },
}

/// A class with coordinates in a declared basis. Forms use the normal
/// monomial basis `<ring>:N^k`; dual elements use `<ring>:<basis>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingElement {
    pub codim: usize,
    pub class: ClassVector,
    pub display: String,
}

#[derive(Clone, Debug)]
pub struct DualBasis {
    pub name: String,
    pub labels: Vec<String>,
    /// Codimension of the forms this basis is dual to.
    pub codim: usize,
    pub dual_to: Vec<Poly>,
    pub dual_to_text: Vec<String>,
    dual_to_coords: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct CapRelations {
    pub basis: String,
    pub codim: usize,
    pub keys: Vec<String>,
    key_coords: Vec<Vec<Rational>>,
    images: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentitySpec {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug)]
pub struct RingPresentation {
    name: String,
    generators: Vec<String>,
    dimension: usize,
    relations: Vec<(Monomial, Poly)>,
    top_values: BTreeMap<Monomial, Rational>,
    classes: BTreeMap<String, (String, Expr)>,
    bases: BTreeMap<String, Vec<String>>,
    dual_bases: BTreeMap<String, DualBasis>,
    cap: Option<CapRelations>,
    identities: Vec<IdentitySpec>,
}

fn malformed(name: &str, reason: impl Into<String>) -> Error {
    Error::MalformedFixture {
        name: name.to_string(),
        reason: reason.into(),
    }
}

/// Object entries, skipping the reserved `source` annotation key.
fn entries<'a>(v: &'a Json, what: &str, ring: &str) -> Result<Vec<(&'a String, &'a Json)>> {
    match v {
        Json::Object(map) => Ok(map.iter().filter(|(k, _)| k.as_str() != "source").collect()),
        _ => Err(malformed(ring, format!("`{what}` must be an object"))),
    }
}

fn rational_leaf(v: &Json) -> Result<Rational> {
    let raw: crate::rational::serde_rational::RawRational = serde_json::from_value(v.clone())?;
    raw.into_rational()
}

fn string_list(v: &Json, what: &str, ring: &str) -> Result<Vec<String>> {
    let arr = v
        .as_array()
        .ok_or_else(|| malformed(ring, format!("`{what}` must be an array of strings")))?;
    arr.iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| malformed(ring, format!("`{what}` must contain strings")))
        })
        .collect()
}

impl RingPresentation {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Json = serde_json::from_str(text)?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Json) -> Result<Self> {
        let name = v.get("name").and_then(Json::as_str).unwrap_or("ring").to_string();
        let generators = string_list(
            v.get("generators").ok_or_else(|| malformed(&name, "missing `generators`"))?,
            "generators",
            &name,
        )?;
        for (i, g) in generators.iter().enumerate() {
            if !is_identifier(g) || generators[..i].contains(g) {
                return Err(malformed(&name, format!("bad or repeated generator name `{g}`")));
            }
        }
        let dimension = v
            .get("dimension")
            .and_then(Json::as_u64)
            .ok_or_else(|| malformed(&name, "missing integer `dimension`"))? as usize;

        let mut ring = RingPresentation {
            name: name.clone(),
            generators,
            dimension,
            relations: Vec::new(),
            top_values: BTreeMap::new(),
            classes: BTreeMap::new(),
            bases: BTreeMap::new(),
            dual_bases: BTreeMap::new(),
            cap: None,
            identities: Vec::new(),
        };

        if let Some(rels) = v.get("relations") {
            for (lhs, rhs) in entries(rels, "relations", &name)? {
                let lhs_poly = ring.raw_poly(lhs)?;
                let lhs_mono = match lhs_poly.0.iter().next() {
                    Some((m, c)) if lhs_poly.0.len() == 1 && c.is_one() && m.degree() > 0 => m.clone(),
                    _ => return Err(malformed(&name, format!("relation key `{lhs}` is not a monomial"))),
                };
                let rhs_poly = match rhs {
                    Json::String(s) => ring.raw_poly(s)?,
                    Json::Object(_) => {
                        let mut p = Poly::zero();
                        for (m, c) in entries(rhs, "relation", &name)? {
                            let mp = ring.raw_poly(m)?;
                            p = p.add(&mp.scale(&rational_leaf(c)?));
                        }
                        p
                    }
                    _ => return Err(malformed(&name, format!("relation `{lhs}` has an unreadable right side"))),
                };
                if rhs_poly.0.keys().any(|m| m.degree() != lhs_mono.degree()) {
                    return Err(malformed(&name, format!("relation `{lhs}` is not homogeneous")));
                }
                ring.relations.push((lhs_mono, rhs_poly));
            }
        }

        if let Some(tops) = v.get("top_values") {
            for (m, c) in entries(tops, "top_values", &name)? {
                let p = ring.raw_poly(m)?;
                let mono = match p.0.iter().next() {
                    Some((mono, k)) if p.0.len() == 1 && k.is_one() => mono.clone(),
                    _ => return Err(malformed(&name, format!("top value key `{m}` is not a monomial"))),
                };
                if mono.degree() != dimension {
                    return Err(malformed(&name, format!("top value key `{m}` is not of top degree")));
                }
                ring.top_values.insert(mono, rational_leaf(c)?);
            }
        }

        if let Some(classes) = v.get("classes") {
            for (label, text) in entries(classes, "classes", &name)? {
                let text = text
                    .as_str()
                    .ok_or_else(|| malformed(&name, format!("class `{label}` must be an expression string")))?;
                if !is_identifier(label) || ring.generators.contains(label) {
                    return Err(malformed(&name, format!("bad class label `{label}`")));
                }
                ring.classes.insert(label.clone(), (text.to_string(), expr::parse(text)?));
            }
        }

        if let Some(duals) = v.get("dual_bases") {
            for (bname, spec) in entries(duals, "dual_bases", &name)? {
                let labels = string_list(
                    spec.get("labels").ok_or_else(|| malformed(&name, "dual basis without `labels`"))?,
                    "labels",
                    &name,
                )?;
                let dual_to_text = string_list(
                    spec.get("dual_to").ok_or_else(|| malformed(&name, "dual basis without `dual_to`"))?,
                    "dual_to",
                    &name,
                )?;
                if labels.len() != dual_to_text.len() {
                    return Err(malformed(&name, format!("dual basis `{bname}` has mismatched lengths")));
                }
                let mut dual_to = Vec::new();
                for t in &dual_to_text {
                    let p = ring.raw_poly(t)?;
                    dual_to.push(ring.reduce(&p)?);
                }
                let codim = dual_to_text
                    .first()
                    .map(|t| ring.raw_poly(t).map(|p| poly_degree(&p)))
                    .transpose()?
                    .flatten()
                    .ok_or_else(|| malformed(&name, format!("dual basis `{bname}` has no nonzero forms")))?;
                let normal = ring.normal_basis(codim);
                let dual_to_coords: Vec<Vec<Rational>> =
                    dual_to.iter().map(|p| normal.iter().map(|m| p.coefficient(m)).collect()).collect();
                if dual_to_coords.len() != normal.len() || rank(&dual_to_coords, normal.len()) != normal.len() {
                    return Err(malformed(
                        &name,
                        format!("`dual_to` of `{bname}` is not a basis of the codimension {codim} forms"),
                    ));
                }
                ring.dual_bases.insert(
                    bname.clone(),
                    DualBasis {
                        name: bname.clone(),
                        labels,
                        codim,
                        dual_to,
                        dual_to_text,
                        dual_to_coords,
                    },
                );
            }
        }

        if let Some(cap) = v.get("cap_relations") {
            let basis = cap
                .get("basis")
                .and_then(Json::as_str)
                .ok_or_else(|| malformed(&name, "cap relations need a `basis`"))?
                .to_string();
            let target = ring
                .dual_bases
                .get(&basis)
                .ok_or_else(|| malformed(&name, format!("cap basis `{basis}` is not a dual basis")))?
                .clone();
            let images_json = cap
                .get("images")
                .ok_or_else(|| malformed(&name, "cap relations need `images`"))?;
            let codim = dimension
                .checked_sub(target.codim)
                .ok_or_else(|| malformed(&name, "cap basis has too large a codimension"))?;
            let normal = ring.normal_basis(codim);
            let mut keys = Vec::new();
            let mut key_coords = Vec::new();
            let mut images = Vec::new();
            for (k, img) in entries(images_json, "images", &name)? {
                let p = ring.reduce(&ring.raw_poly(k)?)?;
                if poly_degree(&p).is_some_and(|d| d != codim) {
                    return Err(malformed(&name, format!("cap key `{k}` has the wrong codimension")));
                }
                let img_text = img
                    .as_str()
                    .ok_or_else(|| malformed(&name, format!("cap image of `{k}` must be an expression")))?;
                let coords = match ring.eval(img_text)? {
                    Value::Dual { basis: b, coords } if b == basis => coords,
                    _ => return Err(malformed(&name, format!("cap image of `{k}` is not in basis `{basis}`"))),
                };
                keys.push(k.clone());
                key_coords.push(normal.iter().map(|m| p.coefficient(m)).collect());
                images.push(coords);
            }
            if rank(&key_coords, normal.len()) != normal.len() {
                return Err(malformed(&name, "cap keys do not span their codimension"));
            }
            ring.cap = Some(CapRelations {
                basis,
                codim,
                keys,
                key_coords,
                images,
            });
        }

        if let Some(ids) = v.get("identities") {
            let arr = ids
                .as_array()
                .ok_or_else(|| malformed(&name, "`identities` must be an array"))?;
            for item in arr {
                let get = |key: &str| {
                    item.get(key)
                        .and_then(Json::as_str)
                        .map(str::to_string)
                        .ok_or_else(|| malformed(&name, format!("identity without `{key}`")))
                };
                ring.identities.push(IdentitySpec {
                    id: get("id")?,
                    lhs: get("lhs")?,
                    rhs: get("rhs")?,
                });
            }
        }

        // Every class must evaluate without the cap relations.
        let labels: Vec<String> = ring.classes.keys().cloned().collect();
        for label in &labels {
            ring.eval(label)
                .map_err(|e| malformed(&name, format!("class `{label}`: {e}")))?;
        }

        if let Some(bases) = v.get("bases") {
            for (bname, list) in entries(bases, "bases", &name)? {
                let labels = string_list(list, "bases", &name)?;
                let values: Vec<Value> = labels.iter().map(|l| ring.eval(l)).collect::<Result<_>>()?;
                let kinds: Vec<String> = values.iter().map(|v| ring.kind_of(v)).collect();
                if kinds.windows(2).any(|w| w[0] != w[1]) {
                    return Err(malformed(&name, format!("basis `{bname}` mixes kinds of classes")));
                }
                ring.bases.insert(bname.clone(), labels);
            }
        }
        Ok(ring)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn class_labels(&self) -> Vec<&str> {
        self.classes.keys().map(String::as_str).collect()
    }

    pub fn class_expression(&self, label: &str) -> Option<&str> {
        self.classes.get(label).map(|(t, _)| t.as_str())
    }

    pub fn basis_labels(&self, basis: &str) -> Option<&[String]> {
        self.bases.get(basis).map(Vec::as_slice)
    }

    pub fn dual_basis(&self, name: &str) -> Option<&DualBasis> {
        self.dual_bases.get(name)
    }

    pub fn cap_relations(&self) -> Option<&CapRelations> {
        self.cap.as_ref()
    }

    pub fn identities(&self) -> &[IdentitySpec] {
        &self.identities
    }

    pub fn has_top_values(&self) -> bool {
        !self.top_values.is_empty()
    }

    /// Normal monomials of the given degree, in display order.
    pub fn normal_basis(&self, codim: usize) -> Vec<Monomial> {
        Monomial::all_of_degree(self.generators.len(), codim)
            .into_iter()
            .filter(|m| !self.relations.iter().any(|(lhs, _)| lhs.divides(m)))
            .collect()
    }

    /// Polynomial built from generators only, without rewriting.
    fn raw_poly(&self, text: &str) -> Result<Poly> {
        fn go(ring: &RingPresentation, e: &Expr) -> Result<Poly> {
            let n = ring.generators.len();
            Ok(match e {
                Expr::Num(k) => Poly::term(Monomial::one(n), Rational::from_integer(k.clone())),
                Expr::Sym(s) => match ring.generators.iter().position(|g| g == s) {
                    Some(i) => Poly::monomial(Monomial::generator(n, i)),
                    None => return Err(Error::Ring(format!("`{s}` is not a generator"))),
                },
                Expr::Neg(a) => go(ring, a)?.scale(&-Rational::one()),
                Expr::Add(a, b) => go(ring, a)?.add(&go(ring, b)?),
                Expr::Sub(a, b) => go(ring, a)?.add(&go(ring, b)?.scale(&-Rational::one())),
                Expr::Mul(a, b) => go(ring, a)?.mul(&go(ring, b)?),
                Expr::Div(a, b) => {
                    let d = go(ring, b)?;
                    match d.0.iter().next() {
                        Some((m, c)) if d.0.len() == 1 && m.degree() == 0 => go(ring, a)?.scale(&(Rational::one() / c)),
                        _ => return Err(Error::Ring("division by a non-scalar".into())),
                    }
                }
                Expr::Pow(a, k) => {
                    let base = go(ring, a)?;
                    let mut out = Poly::monomial(Monomial::one(n));
                    for _ in 0..*k {
                        out = out.mul(&base);
                    }
                    out
                }
            })
        }
        go(self, &expr::parse(text)?)
    }

    /// Rewrites to normal form, applying the first matching relation to the
    /// largest reducible term until none applies.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        self.reduce_steps(p.clone())
    }

    fn reduce_steps(&self, mut pending: Poly) -> Result<Poly> {
        let mut out = Poly::zero();
        let mut steps = 0;
        while let Some((m, c)) = pending.0.pop_first() {
            steps += 1;
            if steps > REWRITE_STEP_LIMIT {
                return Err(Error::Ring("rewriting did not terminate".into()));
            }
            match self.relations.iter().find(|(lhs, _)| lhs.divides(&m)) {
                Some((lhs, rhs)) => {
                    let q = lhs.quotient(&m);
                    pending = pending.add(&rhs.mul_monomial(&q).scale(&c));
                }
                None => out.add_term(m, c),
            }
        }
        Ok(out)
    }

    fn form(&self, codim: usize, poly: &Poly) -> Result<Value> {
        if codim > self.dimension {
            return Err(Error::Degree(format!(
                "product has codimension {codim}, above the top degree {}",
                self.dimension
            )));
        }
        Ok(Value::Form {
            codim,
            poly: self.reduce(poly)?,
        })
    }

    /// Evaluates an expression over generators, classes and dual-basis
    /// labels. Mixing forms with dual elements is refused.
    pub fn eval(&self, text: &str) -> Result<Value> {
        let e = expr::parse(text)?;
        Evaluator {
            ring: self,
            allow_cap: false,
            used_cap: Cell::new(false),
            stack: Vec::new(),
        }
        .eval(&e)
    }

    /// Like [`eval`](Self::eval), but forms added to dual elements are
    /// converted through the cap relations. The flag reports whether that
    /// happened.
    pub fn eval_with_cap(&self, text: &str) -> Result<(Value, bool)> {
        let e = expr::parse(text)?;
        let ev = Evaluator {
            ring: self,
            allow_cap: true,
            used_cap: Cell::new(false),
            stack: Vec::new(),
        };
        let v = ev.eval(&e)?;
        Ok((v, ev.used_cap.get()))
    }

    fn kind_of(&self, v: &Value) -> String {
        match v {
            Value::Scalar(_) => "N^0".into(),
            Value::Form { codim, .. } => format!("N^{codim}"),
            Value::Dual { basis, .. } => format!("dual {basis}"),
        }
    }

    pub fn multiply(&self, a: &Value, b: &Value) -> Result<Value> {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x * y)),
            (Value::Scalar(s), v) | (v, Value::Scalar(s)) => Ok(scale_value(v, s)),
            (Value::Form { codim: i, poly: p }, Value::Form { codim: j, poly: q }) => self.form(i + j, &p.mul(q)),
            _ => Err(Error::Ring(
                "products with dual-basis elements are not part of the presentation".into(),
            )),
        }
    }

    fn monomial_coords(&self, codim: usize, poly: &Poly) -> Vec<Rational> {
        self.normal_basis(codim).iter().map(|m| poly.coefficient(m)).collect()
    }

    fn top_value(&self, poly: &Poly) -> Result<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &poly.0 {
            let v = self.top_values.get(m).ok_or_else(|| {
                Error::Ring(format!(
                    "no top value for `{}`",
                    m.display(&self.generators)
                ))
            })?;
            total += c * v;
        }
        Ok(total)
    }

    /// Degree of a product of total codimension equal to the dimension.
    pub fn top_intersection(&self, factors: &[Value]) -> Result<Rational> {
        let total: usize = factors
            .iter()
            .map(|f| match f {
                Value::Form { codim, .. } => Ok(*codim),
                Value::Scalar(_) => Ok(0),
                Value::Dual { .. } => Err(Error::Ring("top intersection takes forms only".into())),
            })
            .sum::<Result<usize>>()?;
        if total != self.dimension {
            return Err(Error::Degree(format!(
                "factors have total codimension {total}, expected {}",
                self.dimension
            )));
        }
        let mut acc = Value::Scalar(Rational::one());
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        match acc {
            Value::Form { poly, .. } => self.top_value(&poly),
            Value::Scalar(s) => Ok(s),
            Value::Dual { .. } => unreachable!(),
        }
    }

    fn dual_path(&self, codim: usize, poly: &Poly, basis: &str, coords: &[Rational]) -> Result<Rational> {
        let b = &self.dual_bases[basis];
        if b.codim != codim {
            return Err(Error::Degree(format!(
                "basis `{basis}` pairs with codimension {} forms, got codimension {codim}",
                b.codim
            )));
        }
        let x = coordinates(&b.dual_to_coords, &self.monomial_coords(codim, poly))
            .ok_or_else(|| Error::Ring("form outside the span of the dual_to list".into()))?;
        Ok(dot(&x, coords))
    }

    /// Pairing of complementary classes. Form-form pairings use top values;
    /// form-dual pairings use the dual-basis coordinates.
    pub fn pair(&self, a: &Value, b: &Value) -> Result<Rational> {
        match (a, b) {
            (Value::Form { codim: i, poly: p }, Value::Form { codim: j, poly: q }) => {
                if i + j != self.dimension {
                    return Err(Error::Degree(format!(
                        "codimensions {i} and {j} are not complementary in dimension {}",
                        self.dimension
                    )));
                }
                if !self.has_top_values() {
                    return Err(Error::Ring(format!(
                        "`{}` has no top values; pair a form with a dual-basis element instead",
                        self.name
                    )));
                }
                self.top_value(&self.reduce(&p.mul(q))?)
            }
            (Value::Form { codim, poly }, Value::Dual { basis, coords })
            | (Value::Dual { basis, coords }, Value::Form { codim, poly }) => self.dual_path(*codim, poly, basis, coords),
            (Value::Scalar(s), other) | (other, Value::Scalar(s)) => match other {
                _ if s.is_zero() => Ok(Rational::zero()),
                Value::Scalar(t) if self.dimension == 0 => Ok(s * t),
                Value::Scalar(_) => Err(Error::Degree("scalars pair only in dimension 0".into())),
                _ => {
                    let unit = Value::Form {
                        codim: 0,
                        poly: Poly::term(Monomial::one(self.generators.len()), s.clone()),
                    };
                    self.pair(&unit, other)
                }
            },
            (Value::Dual { .. }, Value::Dual { .. }) => {
                Err(Error::Ring("two dual-basis elements cannot be paired".into()))
            }
        }
    }

    /// Expands a form into the cap basis using the printed cap relations.
    /// These relations are audited, not trusted; see
    /// [`consistency_audit`](Self::consistency_audit).
    pub fn cap_expand(&self, v: &Value) -> Result<Value> {
        let cap = self
            .cap
            .as_ref()
            .ok_or_else(|| Error::Ring(format!("`{}` has no cap relations", self.name)))?;
        let (codim, poly) = match v {
            Value::Form { codim, poly } => (*codim, poly),
            Value::Dual { .. } => return Ok(v.clone()),
            Value::Scalar(s) if s.is_zero() => {
                let dim = self.dual_bases[&cap.basis].labels.len();
                return Ok(Value::Dual {
                    basis: cap.basis.clone(),
                    coords: vec![Rational::zero(); dim],
                });
            }
            Value::Scalar(_) => return Err(Error::Degree("cannot cap a nonzero scalar".into())),
        };
        if codim != cap.codim {
            return Err(Error::Degree(format!(
                "cap relations cover codimension {}, got {codim}",
                cap.codim
            )));
        }
        let x = coordinates(&cap.key_coords, &self.monomial_coords(codim, poly))
            .ok_or_else(|| Error::Ring("form outside the span of the cap keys".into()))?;
        let dim = self.dual_bases[&cap.basis].labels.len();
        Ok(Value::Dual {
            basis: cap.basis.clone(),
            coords: combine(&x, &cap.images, dim),
        })
    }

    pub fn element(&self, v: &Value) -> RingElement {
        match v {
            Value::Scalar(s) => RingElement {
                codim: 0,
                class: ClassVector::new(format!("{}:N^0", self.name), vec![s.clone()]),
                display: format_rational(s),
            },
            Value::Form { codim, poly } => RingElement {
                codim: *codim,
                class: ClassVector::new(format!("{}:N^{codim}", self.name), self.monomial_coords(*codim, poly)),
                display: poly.display(&self.generators),
            },
            Value::Dual { basis, coords } => {
                let b = &self.dual_bases[basis];
                let mut poly = Poly::zero();
                let names = b.labels.clone();
                for (i, c) in coords.iter().enumerate() {
                    poly.add_term(Monomial::generator(names.len(), i), c.clone());
                }
                RingElement {
                    codim: self.dimension - b.codim,
                    class: ClassVector::new(format!("{}:{basis}", self.name), coords.clone()),
                    display: poly.display(&names),
                }
            }
        }
    }

    /// Coordinates of `v` in a named basis.
    pub fn coordinates_in(&self, v: &Value, basis: &str) -> Result<ClassVector> {
        let labels = self
            .bases
            .get(basis)
            .ok_or_else(|| Error::Ring(format!("`{}` has no basis `{basis}`", self.name)))?;
        let vectors: Vec<Value> = labels.iter().map(|l| self.eval(l)).collect::<Result<_>>()?;
        let target = self.element(v).class.coords;
        let rows: Vec<Vec<Rational>> = vectors
            .iter()
            .map(|b| {
                if self.kind_of(b) != self.kind_of(v) {
                    Err(Error::BasisMismatch {
                        left: self.kind_of(b),
                        right: self.kind_of(v),
                    })
                } else {
                    Ok(self.element(b).class.coords)
                }
            })
            .collect::<Result<_>>()?;
        let x = coordinates(&rows, &target)
            .ok_or_else(|| Error::Ring(format!("class is not in the span of basis `{basis}`")))?;
        Ok(ClassVector::new(format!("{}:{basis}", self.name), x))
    }

    /// `pair(a_i, b_j)` for two lists of classes.
    pub fn pairing_matrix(&self, rows: &[Value], cols: &[Value]) -> Result<Vec<Vec<Rational>>> {
        rows.iter()
            .map(|a| cols.iter().map(|b| self.pair(a, b)).collect())
            .collect()
    }

    /// Confluence, Gram symmetry, pairing-path agreement and declared
    /// identities. Findings are data, never errors.
    pub fn consistency_audit(&self) -> AuditReport {
        let mut report = AuditReport {
            ring: self.name.clone(),
            confluence: self.audit_confluence(),
            missing_top_values: Vec::new(),
            dual_bases: Vec::new(),
            gram: Vec::new(),
            path_disagreements: Vec::new(),
            identities: Vec::new(),
        };
        if self.has_top_values() {
            report.missing_top_values = self
                .normal_basis(self.dimension)
                .iter()
                .filter(|m| !self.top_values.contains_key(m))
                .map(|m| m.display(&self.generators))
                .collect();
        }
        for b in self.dual_bases.values() {
            report.dual_bases.push(self.audit_dual_basis(b));
        }
        if self.dimension.is_multiple_of(2) {
            self.audit_middle_degree(&mut report);
        }
        for id in &self.identities {
            report.identities.push(self.audit_identity(id));
        }
        report
    }

    fn audit_confluence(&self) -> ConfluenceAudit {
        let mut failures = Vec::new();
        let mut checked = 0;
        for d in 0..=self.dimension {
            for m in Monomial::all_of_degree(self.generators.len(), d) {
                let applicable: Vec<&(Monomial, Poly)> =
                    self.relations.iter().filter(|(lhs, _)| lhs.divides(&m)).collect();
                if applicable.len() < 2 {
                    continue;
                }
                checked += 1;
                let mut forms: Vec<String> = Vec::new();
                let mut results: Vec<Poly> = Vec::new();
                for (lhs, rhs) in applicable {
                    let reduct = rhs.mul_monomial(&lhs.quotient(&m));
                    match self.reduce(&reduct) {
                        Ok(p) => {
                            if !results.contains(&p) {
                                forms.push(p.display(&self.generators));
                                results.push(p);
                            }
                        }
                        Err(e) => forms.push(e.to_string()),
                    }
                }
                if forms.len() > 1 {
                    failures.push(ConfluenceFailure {
                        monomial: m.display(&self.generators),
                        normal_forms: forms,
                    });
                }
            }
        }
        ConfluenceAudit {
            confluent: failures.is_empty(),
            overlapping_monomials: checked,
            failures,
        }
    }

    fn audit_dual_basis(&self, b: &DualBasis) -> DualBasisAudit {
        let mut mismatches = Vec::new();
        let expressed: Vec<Option<Value>> = b
            .labels
            .iter()
            .map(|l| match self.classes.get(l) {
                Some(_) => self.eval(l).ok(),
                None => None,
            })
            .collect();
        let checkable = self.has_top_values() && expressed.iter().all(Option::is_some);
        if checkable {
            for (j, e) in expressed.iter().enumerate() {
                let e = e.as_ref().expect("checked");
                for (i, f) in b.dual_to.iter().enumerate() {
                    let form = Value::Form {
                        codim: b.codim,
                        poly: f.clone(),
                    };
                    let expected = if i == j { Rational::one() } else { Rational::zero() };
                    match self.pair(&form, e) {
                        Ok(v) if v == expected => {}
                        Ok(v) => mismatches.push(format!(
                            "{} . {} = {}, expected {}",
                            b.dual_to_text[i],
                            b.labels[j],
                            format_rational(&v),
                            format_rational(&expected)
                        )),
                        Err(err) => mismatches.push(format!("{} . {}: {err}", b.dual_to_text[i], b.labels[j])),
                    }
                }
            }
        }
        DualBasisAudit {
            basis: b.name.clone(),
            checked_against_top_values: checkable,
            mismatches,
        }
    }

    fn audit_middle_degree(&self, report: &mut AuditReport) {
        let k = self.dimension / 2;
        let monos = self.normal_basis(k);
        let labels: Vec<String> = monos.iter().map(|m| m.display(&self.generators)).collect();
        let forms: Vec<Value> = monos
            .iter()
            .map(|m| Value::Form {
                codim: k,
                poly: Poly::monomial(m.clone()),
            })
            .collect();
        let mut paths: Vec<(PairingPath, Vec<Vec<Rational>>)> = Vec::new();
        if self.has_top_values() {
            if let Ok(m) = self.pairing_matrix(&forms, &forms) {
                paths.push((PairingPath::TopDegree, m));
            }
        }
        if self.cap.as_ref().is_some_and(|c| c.codim == k) {
            let capped: Result<Vec<Value>> = forms.iter().map(|f| self.cap_expand(f)).collect();
            if let Ok(capped) = capped {
                if let Ok(m) = self.pairing_matrix(&forms, &capped) {
                    paths.push((PairingPath::CapRight, m));
                }
            }
        }
        for (path, matrix) in &paths {
            let mut asymmetric = Vec::new();
            for i in 0..matrix.len() {
                for j in i + 1..matrix.len() {
                    if matrix[i][j] != matrix[j][i] {
                        asymmetric.push(AsymmetricEntry {
                            row: labels[i].clone(),
                            col: labels[j].clone(),
                            value: matrix[i][j].clone(),
                            transposed: matrix[j][i].clone(),
                        });
                    }
                }
            }
            report.gram.push(GramAudit {
                codim: k,
                path: *path,
                labels: labels.clone(),
                matrix: matrix.clone(),
                symmetric: asymmetric.is_empty(),
                asymmetric_entries: asymmetric,
            });
        }
        // a . b computed with the cap on either side, and against top values
        let cap_right = paths.iter().find(|(p, _)| *p == PairingPath::CapRight).map(|(_, m)| m);
        let top = paths.iter().find(|(p, _)| *p == PairingPath::TopDegree).map(|(_, m)| m);
        for i in 0..labels.len() {
            for j in i..labels.len() {
                let mut values: Vec<PathValue> = Vec::new();
                if let Some(t) = top {
                    values.push(PathValue::new(PairingPath::TopDegree, t[i][j].clone()));
                }
                if let Some(c) = cap_right {
                    values.push(PathValue::new(PairingPath::CapRight, c[i][j].clone()));
                    values.push(PathValue::new(PairingPath::CapLeft, c[j][i].clone()));
                }
                if values.windows(2).any(|w| w[0].value != w[1].value) {
                    report.path_disagreements.push(PathDisagreement {
                        left: labels[i].clone(),
                        right: labels[j].clone(),
                        values,
                    });
                }
            }
        }
    }

    fn audit_identity(&self, id: &IdentitySpec) -> IdentityAudit {
        let mut audit = IdentityAudit {
            id: id.id.clone(),
            lhs: id.lhs.clone(),
            rhs: id.rhs.clone(),
            holds: false,
            via_cap: false,
            basis: None,
            lhs_coords: Vec::new(),
            rhs_coords: Vec::new(),
            mismatched_coordinates: Vec::new(),
            error: None,
        };
        let both = self
            .eval_with_cap(&id.lhs)
            .and_then(|l| self.eval_with_cap(&id.rhs).map(|r| (l, r)));
        let ((l, cap_l), (r, cap_r)) = match both {
            Ok(x) => x,
            Err(e) => {
                audit.error = Some(e.to_string());
                return audit;
            }
        };
        audit.via_cap = cap_l || cap_r;
        let (l, r) = match (&l, &r) {
            (Value::Form { .. }, Value::Dual { .. }) => match self.cap_expand(&l) {
                Ok(lc) => {
                    audit.via_cap = true;
                    (lc, r)
                }
                Err(e) => {
                    audit.error = Some(e.to_string());
                    return audit;
                }
            },
            (Value::Dual { .. }, Value::Form { .. }) => match self.cap_expand(&r) {
                Ok(rc) => {
                    audit.via_cap = true;
                    (l, rc)
                }
                Err(e) => {
                    audit.error = Some(e.to_string());
                    return audit;
                }
            },
            _ => (l, r),
        };
        let el = self.element(&l);
        let er = self.element(&r);
        if el.class.basis != er.class.basis {
            audit.error = Some(format!("sides live in `{}` and `{}`", el.class.basis, er.class.basis));
            return audit;
        }
        audit.basis = Some(el.class.basis.clone());
        audit.mismatched_coordinates = (0..el.class.dim())
            .filter(|&i| el.class.coords[i] != er.class.coords[i])
            .collect();
        audit.holds = audit.mismatched_coordinates.is_empty();
        audit.lhs_coords = el.class.coords;
        audit.rhs_coords = er.class.coords;
        audit
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn poly_degree(p: &Poly) -> Option<usize> {
    p.0.keys().next().map(Monomial::degree)
}

fn scale_value(v: &Value, s: &Rational) -> Value {
    match v {
        Value::Scalar(x) => Value::Scalar(x * s),
        Value::Form { codim, poly } => Value::Form {
            codim: *codim,
            poly: poly.scale(s),
        },
        Value::Dual { basis, coords } => Value::Dual {
            basis: basis.clone(),
            coords: coords.iter().map(|c| c * s).collect(),
        },
    }
}

struct Evaluator<'a> {
    ring: &'a RingPresentation,
    allow_cap: bool,
    used_cap: Cell<bool>,
    stack: Vec<String>,
}

impl Evaluator<'_> {
    fn eval(&self, e: &Expr) -> Result<Value> {
        let ring = self.ring;
        match e {
            Expr::Num(n) => Ok(Value::Scalar(Rational::from_integer(n.clone()))),
            Expr::Sym(s) => self.symbol(s),
            Expr::Neg(a) => Ok(scale_value(&self.eval(a)?, &-Rational::one())),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?),
            Expr::Sub(a, b) => self.add(self.eval(a)?, scale_value(&self.eval(b)?, &-Rational::one())),
            Expr::Mul(a, b) => ring.multiply(&self.eval(a)?, &self.eval(b)?),
            Expr::Div(a, b) => match self.eval(b)? {
                Value::Scalar(d) if !d.is_zero() => Ok(scale_value(&self.eval(a)?, &(Rational::one() / d))),
                Value::Scalar(_) => Err(Error::Ring("division by zero".into())),
                _ => Err(Error::Ring("division by a class".into())),
            },
            Expr::Pow(a, k) => {
                let base = self.eval(a)?;
                let mut acc = Value::Scalar(Rational::one());
                for _ in 0..*k {
                    acc = ring.multiply(&acc, &base)?;
                }
                if *k == 0 {
                    if let Value::Dual { .. } = base {
                        return Err(Error::Ring("powers of dual-basis elements are undefined".into()));
                    }
                }
                Ok(acc)
            }
        }
    }

    fn symbol(&self, s: &str) -> Result<Value> {
        let ring = self.ring;
        if let Some(i) = ring.generators.iter().position(|g| g == s) {
            return ring.form(1, &Poly::monomial(Monomial::generator(ring.generators.len(), i)));
        }
        if let Some((_, e)) = ring.classes.get(s) {
            if self.stack.iter().any(|x| x == s) {
                return Err(Error::Ring(format!("class `{s}` is defined in terms of itself")));
            }
            let mut inner = Evaluator {
                ring,
                allow_cap: self.allow_cap,
                used_cap: Cell::new(false),
                stack: self.stack.clone(),
            };
            inner.stack.push(s.to_string());
            let v = inner.eval(e)?;
            if inner.used_cap.get() {
                self.used_cap.set(true);
            }
            return Ok(v);
        }
        for b in ring.dual_bases.values() {
            if let Some(i) = b.labels.iter().position(|l| l == s) {
                let mut coords = vec![Rational::zero(); b.labels.len()];
                coords[i] = Rational::one();
                return Ok(Value::Dual {
                    basis: b.name.clone(),
                    coords,
                });
            }
        }
        Err(Error::Ring(format!("unknown symbol `{s}` in `{}`", ring.name)))
    }

    fn add(&self, a: Value, b: Value) -> Result<Value> {
        let ring = self.ring;
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x + y)),
            (Value::Scalar(z), v) | (v, Value::Scalar(z)) if z.is_zero() => Ok(v),
            (Value::Scalar(x), Value::Form { codim: 0, poly }) | (Value::Form { codim: 0, poly }, Value::Scalar(x)) => {
                let one = Poly::term(Monomial::one(ring.generators.len()), x);
                Ok(Value::Form {
                    codim: 0,
                    poly: poly.add(&one),
                })
            }
            (Value::Form { codim: i, poly: p }, Value::Form { codim: j, poly: q }) => {
                if i != j {
                    return Err(Error::Degree(format!("cannot add classes of codimension {i} and {j}")));
                }
                Ok(Value::Form {
                    codim: i,
                    poly: p.add(&q),
                })
            }
            (Value::Dual { basis: b1, coords: c1 }, Value::Dual { basis: b2, coords: c2 }) => {
                if b1 != b2 {
                    return Err(Error::BasisMismatch { left: b1, right: b2 });
                }
                Ok(Value::Dual {
                    basis: b1,
                    coords: crate::rational::add(&c1, &c2),
                })
            }
            (f @ Value::Form { .. }, d @ Value::Dual { .. }) | (d @ Value::Dual { .. }, f @ Value::Form { .. }) => {
                if !self.allow_cap {
                    return Err(Error::Ring(
                        "adding a form to a dual-basis element needs the cap relations".into(),
                    ));
                }
                self.used_cap.set(true);
                let capped = ring.cap_expand(&f)?;
                self.add(capped, d)
            }
            (Value::Scalar(_), _) | (_, Value::Scalar(_)) => {
                Err(Error::Degree("cannot add a nonzero scalar to a class of positive codimension".into()))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingPath {
    /// Multiply, then read off top values.
    TopDegree,
    /// `a . cap(b)` through the dual basis.
    CapRight,
    /// `cap(a) . b` through the dual basis.
    CapLeft,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceFailure {
    pub monomial: String,
    pub normal_forms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceAudit {
    pub confluent: bool,
    /// Monomials of degree at most the dimension where two or more rules
    /// apply.
    pub overlapping_monomials: usize,
    pub failures: Vec<ConfluenceFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualBasisAudit {
    pub basis: String,
    pub checked_against_top_values: bool,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymmetricEntry {
    pub row: String,
    pub col: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub value: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub transposed: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramAudit {
    pub codim: usize,
    pub path: PairingPath,
    pub labels: Vec<String>,
    #[serde(with = "serde_matrix")]
    pub matrix: Vec<Vec<Rational>>,
    pub symmetric: bool,
    pub asymmetric_entries: Vec<AsymmetricEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathValue {
    pub path: PairingPath,
    #[serde(with = "crate::rational::serde_rational")]
    pub value: Rational,
}

impl PathValue {
    fn new(path: PairingPath, value: Rational) -> Self {
        Self { path, value }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathDisagreement {
    pub left: String,
    pub right: String,
    pub values: Vec<PathValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityAudit {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub via_cap: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    #[serde(with = "serde_vector")]
    pub lhs_coords: Vec<Rational>,
    #[serde(with = "serde_vector")]
    pub rhs_coords: Vec<Rational>,
    pub mismatched_coordinates: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFlag {
    pub code: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub ring: String,
    pub confluence: ConfluenceAudit,
    pub missing_top_values: Vec<String>,
    pub dual_bases: Vec<DualBasisAudit>,
    pub gram: Vec<GramAudit>,
    pub path_disagreements: Vec<PathDisagreement>,
    pub identities: Vec<IdentityAudit>,
}

impl AuditReport {
    pub fn flags(&self) -> Vec<AuditFlag> {
        let mut out = Vec::new();
        for f in &self.confluence.failures {
            out.push(AuditFlag {
                code: "non_confluent",
                message: format!("{} has normal forms {}", f.monomial, f.normal_forms.join(" | ")),
            });
        }
        for m in &self.missing_top_values {
            out.push(AuditFlag {
                code: "missing_top_value",
                message: format!("normal top monomial {m} has no value"),
            });
        }
        for d in &self.dual_bases {
            for m in &d.mismatches {
                out.push(AuditFlag {
                    code: "dual_basis_mismatch",
                    message: format!("{}: {m}", d.basis),
                });
            }
        }
        for g in &self.gram {
            for e in &g.asymmetric_entries {
                out.push(AuditFlag {
                    code: "asymmetric_gram",
                    message: format!(
                        "{}.{} = {} but {}.{} = {}",
                        e.row,
                        e.col,
                        format_rational(&e.value),
                        e.col,
                        e.row,
                        format_rational(&e.transposed)
                    ),
                });
            }
        }
        for p in &self.path_disagreements {
            let vals: Vec<String> = p
                .values
                .iter()
                .map(|v| format!("{:?}={}", v.path, format_rational(&v.value)))
                .collect();
            out.push(AuditFlag {
                code: "pairing_path_disagreement",
                message: format!("{} . {}: {}", p.left, p.right, vals.join(", ")),
            });
        }
        for i in &self.identities {
            if !i.holds {
                out.push(AuditFlag {
                    code: "identity_mismatch",
                    message: match &i.error {
                        Some(e) => format!("{}: {e}", i.id),
                        None => format!("{}: {} != {} in coordinates {:?}", i.id, i.lhs, i.rhs, i.mismatched_coordinates),
                    },
                });
            }
        }
        out
    }

    pub fn is_clean(&self) -> bool {
        self.flags().is_empty()
    }

    pub fn has_flag(&self, code: &str) -> bool {
        self.flags().iter().any(|f| f.code == code)
    }
}
